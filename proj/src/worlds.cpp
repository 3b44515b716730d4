#include "pxq/worlds.hpp"

#include <algorithm>
#include <cstdint>

#include "pxq/index.hpp"

namespace pxq {

CapExceeded::CapExceeded(const std::string& what, double world_estimate)
    : Error(what), world_estimate_(world_estimate) {}

namespace {

using Bits = std::vector<std::uint64_t>;
using Outcomes = std::map<Bits, double>;

struct OrdinaryNode {
  const PNode* node;
  Dewey dewey;
  int parent;  // nearest ordinary ancestor, -1 for the root
};

// Ordinary nodes in document order.
struct Flattened {
  std::vector<OrdinaryNode> nodes;

  explicit Flattened(const PDocument& doc) {
    Dewey dewey{1};
    walk(doc.root, dewey, -1);
  }

  void walk(const PNode& n, Dewey& dewey, int ord_parent) {
    int self = ord_parent;
    if (n.kind == NodeKind::ordinary) {
      self = static_cast<int>(nodes.size());
      nodes.push_back({&n, dewey, ord_parent});
    }
    std::uint32_t ordinal = 0;
    for (const PNode& c : n.children) {
      dewey.push_back(++ordinal);
      walk(c, dewey, self);
      dewey.pop_back();
    }
  }
};

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }

Bits bit_or(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] | b[i];
  return out;
}

Outcomes cross(const Outcomes& acc, const Outcomes& options) {
  Outcomes out;
  for (const auto& [a, pa] : acc) {
    for (const auto& [b, pb] : options) out[bit_or(a, b)] += pa * pb;
  }
  return out;
}

// Outcomes of the subtree at `n`, given that `n` is present. `next` walks the
// ordinary nodes in document order, matching Flattened.
Outcomes local_worlds(const PNode& n, int& next, std::size_t words) {
  Bits self(words, 0);
  if (n.kind == NodeKind::ordinary) {
    const int id = next++;
    self[static_cast<std::size_t>(id) / 64] |= std::uint64_t{1} << (id % 64);
  }

  if (n.kind == NodeKind::mux) {
    Outcomes out;
    double rest = 1.0;
    for (const PNode& c : n.children) {
      for (const auto& [bits, p] : local_worlds(c, next, words)) out[bits] += c.edge_prob * p;
      rest -= c.edge_prob;
    }
    if (rest > 1e-15) out[self] += rest;
    return out;
  }

  Outcomes acc{{self, 1.0}};
  for (const PNode& c : n.children) {
    Outcomes options;
    for (const auto& [bits, p] : local_worlds(c, next, words)) options[bits] += c.edge_prob * p;
    if (c.edge_prob < 1.0) options[Bits(words, 0)] += 1.0 - c.edge_prob;
    acc = cross(acc, options);
  }
  return acc;
}

double estimate(const PNode& n) {
  if (n.kind == NodeKind::mux) {
    double e = 1.0;
    for (const PNode& c : n.children) e += estimate(c);
    return e;
  }
  double e = 1.0;
  for (const PNode& c : n.children) e *= estimate(c) + (c.edge_prob < 1.0 ? 1.0 : 0.0);
  return e;
}

std::size_t count_choice_points(const PNode& n) {
  std::size_t k = is_distributional(n.kind) ? 1 : 0;
  for (const PNode& c : n.children) k += count_choice_points(c);
  return k;
}

Outcomes enumerate(const PDocument& doc, const Flattened& flat, const WorldsOptions& opts) {
  const std::size_t points = count_choice_points(doc.root);
  const double est = estimate(doc.root);
  if (points > opts.max_choice_points) {
    throw CapExceeded("document has " + std::to_string(points) +
                          " distributional nodes; enumeration cap is " +
                          std::to_string(opts.max_choice_points) + " (about " +
                          std::to_string(static_cast<long double>(est)) + " worlds)",
                      est);
  }
  if (est > opts.max_worlds) {
    throw CapExceeded("document may have up to " + std::to_string(static_cast<long double>(est)) +
                          " possible worlds; cap is " +
                          std::to_string(static_cast<long double>(opts.max_worlds)),
                      est);
  }
  const std::size_t words = std::max<std::size_t>(1, (flat.nodes.size() + 63) / 64);
  int next = 0;
  return local_worlds(doc.root, next, words);
}

// Deterministic ELCA/SLCA by keyword coverage: a node is an ELCA when its
// own matches plus the subtrees of children that do not cover every
// keyword still cover every keyword; an SLCA when it covers everything and
// no child does. Nodes are in document order (parent[i] < i); absent nodes
// are skipped when `present` is given.
void classify(std::span<const int> parent, std::span<const Mask> direct, Mask full,
              const Bits* present, std::vector<char>& elca, std::vector<char>& slca) {
  const std::size_t n = direct.size();
  std::vector<Mask> sub(direct.begin(), direct.end());
  std::vector<Mask> own(direct.begin(), direct.end());
  std::vector<char> full_child(n, 0);
  for (std::size_t i = n; i-- > 1;) {
    if (present && !test_bit(*present, i)) continue;
    const auto p = static_cast<std::size_t>(parent[i]);
    sub[p] |= sub[i];
    if (sub[i] == full) full_child[p] = 1;
    else own[p] |= sub[i];
  }
  elca.assign(n, 0);
  slca.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (present && !test_bit(*present, i)) continue;
    if (sub[i] != full) continue;
    elca[i] = own[i] == full;
    slca[i] = !full_child[i];
  }
}

Mask direct_mask(const std::string& label, const std::optional<std::string>& text,
                 std::span<const std::string> keywords) {
  std::vector<std::string> tokens = tokenize_text(label);
  if (text) {
    auto more = tokenize_text(*text);
    tokens.insert(tokens.end(), more.begin(), more.end());
  }
  Mask m = 0;
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    if (std::find(tokens.begin(), tokens.end(), keywords[k]) != tokens.end()) m |= Mask{1} << k;
  }
  return m;
}

std::vector<int> det_eval(const DetTree& tree, std::span<const std::string> keywords,
                          Semantics semantics) {
  if (keywords.empty() || keywords.size() > kMaxArity) {
    throw QueryError("keyword count outside [1, " + std::to_string(kMaxArity) + "]");
  }
  std::vector<int> parent;
  std::vector<Mask> direct;
  for (const DetNode& n : tree.nodes) {
    parent.push_back(n.parent);
    direct.push_back(direct_mask(n.label, n.text, keywords));
  }
  std::vector<char> elca, slca;
  classify(parent, direct, full_mask(static_cast<unsigned>(keywords.size())), nullptr, elca,
           slca);
  const std::vector<char>& flags = semantics == Semantics::elca ? elca : slca;
  std::vector<int> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

std::size_t choice_points(const PDocument& doc) { return count_choice_points(doc.root); }

double world_count_estimate(const PDocument& doc) { return estimate(doc.root); }

std::vector<World> enumerate_worlds(const PDocument& doc, const WorldsOptions& opts) {
  const Flattened flat(doc);
  const Outcomes outcomes = enumerate(doc, flat, opts);
  std::vector<World> worlds;
  worlds.reserve(outcomes.size());
  std::vector<int> compact(flat.nodes.size(), -1);
  for (const auto& [bits, prob] : outcomes) {
    World w;
    w.prob = prob;
    for (std::size_t i = 0; i < flat.nodes.size(); ++i) {
      if (!test_bit(bits, i)) continue;
      const OrdinaryNode& o = flat.nodes[i];
      DetNode d;
      d.label = o.node->label;
      d.text = o.node->text;
      d.origin = o.dewey;
      d.parent = o.parent < 0 ? -1 : compact[static_cast<std::size_t>(o.parent)];
      compact[i] = static_cast<int>(w.tree.nodes.size());
      if (d.parent >= 0) w.tree.nodes[static_cast<std::size_t>(d.parent)].children.push_back(compact[i]);
      w.tree.nodes.push_back(std::move(d));
    }
    worlds.push_back(std::move(w));
  }
  return worlds;
}

std::vector<int> det_elca(const DetTree& tree, std::span<const std::string> keywords) {
  return det_eval(tree, keywords, Semantics::elca);
}

std::vector<int> det_slca(const DetTree& tree, std::span<const std::string> keywords) {
  return det_eval(tree, keywords, Semantics::slca);
}

std::map<Dewey, double> oracle_prob(const PDocument& doc, std::span<const std::string> keywords,
                                    Semantics semantics, const WorldsOptions& opts) {
  if (keywords.empty() || keywords.size() > kMaxArity) {
    throw QueryError("keyword count outside [1, " + std::to_string(kMaxArity) + "]");
  }
  const Flattened flat(doc);
  const Outcomes outcomes = enumerate(doc, flat, opts);

  std::vector<int> parent;
  std::vector<Mask> direct;
  for (const OrdinaryNode& o : flat.nodes) {
    parent.push_back(o.parent);
    direct.push_back(direct_mask(o.node->label, o.node->text, keywords));
  }
  const Mask full = full_mask(static_cast<unsigned>(keywords.size()));

  std::vector<double> total(flat.nodes.size(), 0.0);
  std::vector<char> elca, slca;
  for (const auto& [bits, prob] : outcomes) {
    classify(parent, direct, full, &bits, elca, slca);
    const std::vector<char>& flags = semantics == Semantics::elca ? elca : slca;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) total[i] += prob;
    }
  }
  std::map<Dewey, double> out;
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (total[i] > 0.0) out.emplace(flat.nodes[i].dewey, total[i]);
  }
  return out;
}

std::map<Dewey, double> oracle_existence(const PDocument& doc, const WorldsOptions& opts) {
  const Flattened flat(doc);
  const Outcomes outcomes = enumerate(doc, flat, opts);
  std::vector<double> total(flat.nodes.size(), 0.0);
  for (const auto& [bits, prob] : outcomes) {
    for (std::size_t i = 0; i < total.size(); ++i) {
      if (test_bit(bits, i)) total[i] += prob;
    }
  }
  std::map<Dewey, double> out;
  for (std::size_t i = 0; i < total.size(); ++i) out.emplace(flat.nodes[i].dewey, total[i]);
  return out;
}

std::vector<std::string> label_path(const PDocument& doc, const Dewey& dewey) {
  std::vector<std::string> out;
  const PNode* node = &doc.root;
  for (std::size_t i = 0; i < dewey.size(); ++i) {
    if (i > 0) {
      if (dewey[i] == 0 || dewey[i] > node->children.size()) throw Error("node not in document");
      node = &node->children[dewey[i] - 1];
    }
    switch (node->kind) {
      case NodeKind::ordinary: out.push_back(node->label); break;
      case NodeKind::ind: out.emplace_back("[ind]"); break;
      case NodeKind::mux: out.emplace_back("[mux]"); break;
    }
  }
  return out;
}

std::vector<ElcaResult> oracle_results(const PDocument& doc,
                                       std::span<const std::string> keywords,
                                       Semantics semantics, const WorldsOptions& opts) {
  std::vector<ElcaResult> out;
  for (const auto& [dewey, prob] : oracle_prob(doc, keywords, semantics, opts)) {
    ElcaResult r;
    r.dewey = dewey;
    r.label_path = label_path(doc, dewey);
    r.global_prob = prob;
    r.local_prob = prob / path_probability(doc, dewey);
    out.push_back(std::move(r));
  }
  sort_results(out);
  return out;
}

}  // namespace pxq
