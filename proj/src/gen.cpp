#include "pxq/gen.hpp"

#include <cmath>
#include <numeric>

#include "pxq/pdewey.hpp"

namespace pxq {

namespace {

struct ProbRange {
  std::int64_t lo;
  std::int64_t hi;
};

ProbRange grid_range(const GenConfig& cfg) {
  return {std::max<std::int64_t>(1, quantize_prob(cfg.prob_lo)), quantize_prob(cfg.prob_hi)};
}

// Draws edge probabilities for the children of a freshly created
// distributional node.
void assign_probs(PNode& dist, const ProbRange& range, Rng& rng) {
  std::vector<std::int64_t> micros;
  micros.reserve(dist.children.size());
  for (std::size_t i = 0; i < dist.children.size(); ++i) {
    micros.push_back(rng.between(range.lo, range.hi));
  }
  if (dist.kind == NodeKind::mux) {
    const std::int64_t sum = std::accumulate(micros.begin(), micros.end(), std::int64_t{0});
    if (sum > kMicro) {
      std::int64_t scaled_sum = 0;
      for (std::int64_t& m : micros) {
        m = std::max<std::int64_t>(1, m * kMicro / sum);
        scaled_sum += m;
      }
      // Floors keep the sum at or below 1 unless the lower clamp kicked in.
      for (std::size_t i = 0; scaled_sum > kMicro; i = (i + 1) % micros.size()) {
        if (micros[i] > 1) {
          --micros[i];
          --scaled_sum;
        }
      }
    }
  }
  for (std::size_t i = 0; i < micros.size(); ++i) {
    dist.children[i].edge_prob = prob_from_micros(micros[i]);
  }
}

struct Injector {
  const GenConfig& cfg;
  ProbRange range;
  double wraps_per_node;
  Rng rng;

  void wrap(std::vector<PNode>& children) {
    const std::size_t len = children.size();
    const std::size_t size = 1 + rng.below(len);
    const std::size_t start = rng.below(len - size + 1);
    const bool ind =
        rng.uniform() * (cfg.ind_fraction + cfg.mux_fraction) < cfg.ind_fraction;

    PNode dist = PNode::distributional(ind ? NodeKind::ind : NodeKind::mux);
    const auto first = children.begin() + static_cast<std::ptrdiff_t>(start);
    const auto last = first + static_cast<std::ptrdiff_t>(size);
    dist.children.assign(std::make_move_iterator(first), std::make_move_iterator(last));
    assign_probs(dist, range, rng);
    const auto at = children.erase(first, last);
    children.insert(at, std::move(dist));
  }

  void visit(PNode& node) {
    if (node.kind == NodeKind::ordinary && !node.children.empty()) {
      const double whole = std::floor(wraps_per_node);
      auto wraps = static_cast<std::size_t>(whole);
      if (rng.uniform() < wraps_per_node - whole) ++wraps;
      for (std::size_t i = 0; i < wraps; ++i) wrap(node.children);
    }
    for (PNode& child : node.children) visit(child);
  }
};

void count(const PNode& n, std::size_t& ordinary, std::size_t& internal) {
  if (n.kind == NodeKind::ordinary) {
    ++ordinary;
    if (!n.children.empty()) ++internal;
  }
  for (const PNode& c : n.children) count(c, ordinary, internal);
}

}  // namespace

void check_config(const GenConfig& cfg) {
  if (cfg.ind_fraction < 0 || cfg.mux_fraction < 0 ||
      cfg.ind_fraction + cfg.mux_fraction >= 1.0) {
    throw Error("distributional fractions must be nonnegative and sum below 1");
  }
  if (!(cfg.prob_lo > 0 && cfg.prob_lo <= cfg.prob_hi && cfg.prob_hi <= 1.0)) {
    throw Error("probability range must satisfy 0 < lo <= hi <= 1");
  }
}

PDocument inject(const PDocument& det_doc, const GenConfig& cfg) {
  check_config(cfg);
  std::size_t ordinary = 0, internal = 0;
  count(det_doc.root, ordinary, internal);
  const double frac = cfg.ind_fraction + cfg.mux_fraction;
  const double target = static_cast<double>(ordinary) * frac / (1.0 - frac);

  Injector inj{cfg, grid_range(cfg), internal ? target / static_cast<double>(internal) : 0.0,
               Rng(cfg.seed)};
  PNode root = det_doc.root;
  if (frac > 0.0) inj.visit(root);
  return make_document(std::move(root));
}

PDocument random_small_doc(std::uint64_t seed, std::size_t max_nodes,
                           std::size_t max_dist_nodes,
                           const std::vector<std::string>& alphabet) {
  if (max_nodes == 0) throw Error("max_nodes must be positive");
  if (alphabet.empty()) throw Error("alphabet must not be empty");
  Rng rng(seed);
  const std::size_t total = 1 + rng.below(max_nodes);
  const std::size_t dist_cap = std::min(max_dist_nodes, total - 1);
  std::size_t dist_left = rng.below(dist_cap + 1);

  struct Slot {
    NodeKind kind;
    std::size_t parent;
    std::string label;
    std::optional<std::string> text;
  };
  std::vector<Slot> slots;
  slots.reserve(total);
  auto pick = [&] { return alphabet[rng.below(alphabet.size())]; };

  // Distributional nodes with fewer than two children attract new nodes, so
  // few of them end up as empty choices.
  std::vector<std::size_t> hungry;
  std::vector<std::size_t> child_count(total, 0);
  slots.push_back({NodeKind::ordinary, 0, pick(), std::nullopt});
  for (std::size_t i = 1; i < total; ++i) {
    const std::size_t slots_left = total - i;
    std::size_t parent = rng.below(i);
    if (!hungry.empty() && rng.below(2) == 0) {
      const std::size_t h = rng.below(hungry.size());
      parent = hungry[h];
      if (++child_count[parent] >= 2) hungry.erase(hungry.begin() + static_cast<std::ptrdiff_t>(h));
    } else {
      ++child_count[parent];
    }
    Slot s{NodeKind::ordinary, parent, {}, std::nullopt};
    if (dist_left > 0 && rng.below(slots_left) < dist_left) {
      s.kind = rng.below(2) ? NodeKind::mux : NodeKind::ind;
      hungry.push_back(i);
      --dist_left;
    } else {
      s.label = pick();
    }
    slots.push_back(std::move(s));
  }
  for (Slot& s : slots) {
    if (s.kind == NodeKind::ordinary && rng.below(3) == 0) {
      s.text = pick();
      if (rng.below(2) == 0) *s.text += " " + pick();
    }
  }

  std::vector<std::vector<std::size_t>> kids(total);
  for (std::size_t i = 1; i < total; ++i) kids[slots[i].parent].push_back(i);

  const ProbRange range{50'000, kMicro};
  auto build = [&](auto&& self, std::size_t i) -> PNode {
    PNode n = slots[i].kind == NodeKind::ordinary ? PNode::ordinary(slots[i].label)
                                                  : PNode::distributional(slots[i].kind);
    n.text = slots[i].text;
    for (std::size_t k : kids[i]) n.children.push_back(self(self, k));
    if (is_distributional(n.kind) && !n.children.empty()) assign_probs(n, range, rng);
    return n;
  };
  return make_document(build(build, 0));
}

PDocument synthetic_det_doc(std::uint64_t seed, std::size_t nodes) {
  if (nodes == 0) throw Error("node count must be positive");
  Rng rng(seed);
  auto word = [&] {
    // Roughly log-uniform over 64 ranks: low ranks are frequent.
    const double u = rng.uniform();
    const auto rank = static_cast<std::size_t>(std::exp(u * std::log(65.0))) - 1;
    return "w" + std::to_string(std::min<std::size_t>(rank, 63));
  };

  std::vector<std::size_t> parent(nodes, 0);
  std::vector<std::string> labels(nodes);
  std::vector<std::optional<std::string>> texts(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (i > 0) parent[i] = rng.below(i);
    labels[i] = word();
    if (rng.below(2) == 0) {
      std::string t = word();
      const std::size_t extra = rng.below(3);
      for (std::size_t k = 0; k < extra; ++k) t += " " + word();
      texts[i] = std::move(t);
    }
  }

  // Children in index order; built bottom-up so no recursion is needed.
  std::vector<std::vector<std::size_t>> kids(nodes);
  for (std::size_t i = 1; i < nodes; ++i) kids[parent[i]].push_back(i);
  std::vector<PNode> built(nodes);
  for (std::size_t i = nodes; i-- > 0;) {
    PNode n = PNode::ordinary(std::move(labels[i]));
    n.text = std::move(texts[i]);
    n.children.reserve(kids[i].size());
    for (std::size_t k : kids[i]) n.children.push_back(std::move(built[k]));
    built[i] = std::move(n);
  }
  return make_document(std::move(built[0]));
}

}  // namespace pxq
