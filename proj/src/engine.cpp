#include "pxq/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace pxq {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kMonotoneSlack = 1e-12;

std::string distributional_label(NodeKind kind) {
  return kind == NodeKind::ind ? "[ind]" : "[mux]";
}

[[noreturn]] void breach(const std::string& what) {
  throw std::logic_error("engine invariant breach: " + what);
}

std::size_t entry_bytes(const StackEntry& e) {
  return sizeof(StackEntry) + (e.dist.size() + e.acc.size()) * sizeof(DistTable::Entry);
}

void check_keywords(std::span<const std::string> keywords) {
  if (keywords.empty()) throw QueryError("query needs at least one keyword");
  if (keywords.size() > kMaxArity) {
    throw QueryError("query has " + std::to_string(keywords.size()) +
                     " keywords; at most " + std::to_string(kMaxArity) + " are supported");
  }
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    for (std::size_t j = i + 1; j < keywords.size(); ++j) {
      if (keywords[i] == keywords[j]) throw QueryError("duplicate keyword '" + keywords[i] + "'");
    }
  }
}

}  // namespace

std::string_view semantics_name(Semantics s) { return s == Semantics::elca ? "elca" : "slca"; }

std::size_t lcp(std::span<const StackEntry> stack, std::span<const std::uint32_t> dewey) {
  const std::size_t limit = std::min(stack.size(), dewey.size());
  std::size_t p = 0;
  while (p < limit && stack[p].component == dewey[p]) ++p;
  return p;
}

std::optional<ElcaResult> pop_and_fold(std::vector<StackEntry>& stack, Semantics semantics,
                                       const QueryOptions& opts, QueryStats* stats) {
  if (stack.empty()) breach("pop on empty stack");

  std::optional<ElcaResult> result;
  Dewey dewey;
  if (opts.on_pop || stack.back().kind == NodeKind::ordinary) {
    dewey.reserve(stack.size());
    for (const StackEntry& e : stack) dewey.push_back(e.component);
  }

  StackEntry popped = std::move(stack.back());
  stack.pop_back();
  const unsigned arity = popped.dist.arity();

  std::optional<DistTable> passed;
  if (popped.kind == NodeKind::ordinary) {
    if (popped.self_mask != 0) {
      // Direct matches count for the node itself and are never screened.
      const DistTable self = leaf_table(arity, popped.self_mask);
      popped.dist = merge_ordinary(popped.dist, self);
      popped.acc = merge_ordinary(popped.acc, self);
    }
    const double local = popped.acc[popped.acc.full()];
    if (local > 0.0) {
      double path = popped.edge_prob;
      for (const StackEntry& e : stack) path *= e.edge_prob;
      ElcaResult r;
      r.dewey = dewey;
      r.label_path.reserve(dewey.size());
      for (const StackEntry& e : stack) {
        r.label_path.push_back(e.kind == NodeKind::ordinary ? std::string{}
                                                            : distributional_label(e.kind));
      }
      r.label_path.emplace_back();
      r.local_prob = local;
      r.global_prob = path * local;
      result = std::move(r);
    }
    passed = semantics == Semantics::elca ? elca_modify(popped.dist) : strip_full(popped.dist);
  } else {
    passed = popped.acc;
  }

  if (opts.check_invariants) {
    if (std::abs(popped.dist.sum() - 1.0) > kSumTolerance) {
      breach("keyword distribution of popped node sums to " + std::to_string(popped.dist.sum()));
    }
    if (stats) ++stats->invariant_checks;
  }

  if (!stack.empty()) {
    StackEntry& parent = stack.back();
    const double before = parent.acc[parent.acc.full()];
    const double lambda = popped.edge_prob;
    if (parent.kind == NodeKind::mux) {
      parent.dist = merge_mux(parent.dist, popped.dist, lambda);
      parent.acc = merge_mux(parent.acc, *passed, lambda);
    } else {
      parent.dist = merge_ordinary(parent.dist, ind_standardize(popped.dist, lambda));
      parent.acc = merge_ordinary(parent.acc, ind_standardize(*passed, lambda));
    }
    if (opts.check_invariants && semantics == Semantics::elca) {
      if (parent.acc[parent.acc.full()] < before - kMonotoneSlack) {
        breach("ELCA accumulator decreased");
      }
      if (stats) ++stats->invariant_checks;
    }
  }

  if (stats) ++stats->pops;
  if (opts.on_pop) {
    opts.on_pop(PopEvent{std::move(dewey), popped, *passed, stack.empty() ? nullptr : &stack.back()});
  }
  return result;
}

std::vector<ElcaResult> run_query(const InvertedIndex& index,
                                  std::span<const std::string> keywords, Semantics semantics,
                                  const QueryOptions& opts, QueryStats* stats) {
  check_keywords(keywords);
  const auto arity = static_cast<unsigned>(keywords.size());

  std::vector<std::span<const Posting>> lists;
  lists.reserve(arity);
  for (const std::string& k : keywords) lists.push_back(index.lookup(k));
  std::vector<std::size_t> cursor(arity, 0);

  QueryStats local_stats;
  QueryStats& st = stats ? *stats : local_stats;
  st = QueryStats{};

  std::vector<StackEntry> stack;
  std::vector<ElcaResult> results;
  std::size_t live_bytes = 0;

  auto pop = [&] {
    live_bytes -= std::min(live_bytes, entry_bytes(stack.back()));
    if (stack.size() >= 2) live_bytes -= std::min(live_bytes, entry_bytes(stack[stack.size() - 2]));
    if (auto r = pop_and_fold(stack, semantics, opts, &st)) results.push_back(std::move(*r));
    if (!stack.empty()) live_bytes += entry_bytes(stack.back());
  };

  while (true) {
    // Next node in document order across all lists.
    const Posting* next = nullptr;
    for (unsigned i = 0; i < arity; ++i) {
      if (cursor[i] < lists[i].size()) {
        const Posting& head = lists[i][cursor[i]];
        if (next == nullptr || head.code < next->code) next = &head;
      }
    }
    if (next == nullptr) break;
    Mask mask = 0;
    for (unsigned i = 0; i < arity; ++i) {
      if (cursor[i] < lists[i].size() && lists[i][cursor[i]].code == next->code) {
        mask |= Mask{1} << i;
        ++cursor[i];
        ++st.postings_read;
      }
    }
    ++st.nodes_read;

    const std::vector<std::int64_t>& fields = next->code.fields;
    Dewey components(fields.size());
    std::vector<double> probs(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      auto [c, micros] = decode_field(fields[j]);
      components[j] = c;
      probs[j] = prob_from_micros(micros);
    }

    const std::size_t p = lcp(stack, components);
    while (stack.size() > p) pop();

    if (opts.check_invariants) {
      for (std::size_t j = 0; j < p; ++j) {
        if (stack[j].kind != next->kinds[j] || stack[j].edge_prob != probs[j]) {
          breach("postings disagree on the path at " + dewey_string(components));
        }
      }
    }

    if (p == components.size()) {
      stack.back().self_mask |= mask;
    } else {
      for (std::size_t j = p; j < components.size(); ++j) {
        stack.push_back(StackEntry{components[j], next->kinds[j], probs[j], unit_table(arity),
                                   unit_table(arity),
                                   j + 1 == components.size() ? mask : Mask{0}});
        live_bytes += entry_bytes(stack.back());
      }
    }
    st.max_depth = std::max(st.max_depth, stack.size());
    st.peak_bytes = std::max(st.peak_bytes, live_bytes);
  }
  while (!stack.empty()) pop();

  for (ElcaResult& r : results) {
    Dewey prefix;
    prefix.reserve(r.dewey.size());
    for (std::size_t i = 0; i < r.dewey.size(); ++i) {
      prefix.push_back(r.dewey[i]);
      if (r.label_path[i].empty()) {
        if (const std::string* label = index.label(prefix)) r.label_path[i] = *label;
      }
    }
  }
  sort_results(results);
  return results;
}

std::vector<ElcaResult> prelca_query(const InvertedIndex& index,
                                     std::span<const std::string> keywords,
                                     const QueryOptions& opts, QueryStats* stats) {
  return run_query(index, keywords, Semantics::elca, opts, stats);
}

std::vector<ElcaResult> prslca_query(const InvertedIndex& index,
                                     std::span<const std::string> keywords,
                                     const QueryOptions& opts, QueryStats* stats) {
  return run_query(index, keywords, Semantics::slca, opts, stats);
}

void sort_results(std::vector<ElcaResult>& results) {
  std::sort(results.begin(), results.end(), [](const ElcaResult& a, const ElcaResult& b) {
    if (a.global_prob != b.global_prob) return a.global_prob > b.global_prob;
    return a.dewey < b.dewey;
  });
}

namespace {

std::string join_labels(const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += '/';
    s += labels[i];
  }
  return s;
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

}  // namespace

void write_results_tsv(std::ostream& out, std::span<const ElcaResult> results) {
  for (const ElcaResult& r : results) {
    out << dewey_string(r.dewey) << '\t' << join_labels(r.label_path) << '\t'
        << fixed9(r.local_prob) << '\t' << fixed9(r.global_prob) << '\n';
  }
}

void write_results_json(std::ostream& out, std::span<const ElcaResult> results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ElcaResult& r : results) {
    arr.push_back({{"dewey", dewey_string(r.dewey)},
                   {"label_path", join_labels(r.label_path)},
                   {"local_prob", r.local_prob},
                   {"global_prob", r.global_prob}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace pxq
