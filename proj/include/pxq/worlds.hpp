// Exact possible-world semantics, used as ground truth.
//
// Enumeration resolves every distributional node (IND children appear
// independently, a MUX picks at most one child) and splices distributional
// nodes out, so ordinary descendants hang under their nearest ordinary
// ancestor. Node identity across worlds is the Dewey path in the original
// p-document. The cost is exponential by nature and guarded by caps.

#ifndef PXQ_WORLDS_HPP
#define PXQ_WORLDS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pxq/dist_table.hpp"
#include "pxq/engine.hpp"
#include "pxq/model.hpp"

namespace pxq {

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, double world_estimate);
  double world_estimate() const { return world_estimate_; }

 private:
  double world_estimate_;
};

struct WorldsOptions {
  std::size_t max_choice_points = 20;  // distributional nodes
  double max_worlds = 1 << 22;         // upper bound on distinct outcomes
};

/// Deterministic tree. nodes[0] is the root; nodes are in document order
/// and `parent` of every non-root node precedes it.
struct DetNode {
  std::string label;
  std::optional<std::string> text;
  Dewey origin;  // Dewey path in the originating p-document
  int parent = -1;
  std::vector<int> children;
};

struct DetTree {
  std::vector<DetNode> nodes;
};

struct World {
  DetTree tree;
  double prob = 0.0;
};

/// Number of distributional nodes.
std::size_t choice_points(const PDocument& doc);

/// Upper bound on the number of possible worlds.
double world_count_estimate(const PDocument& doc);

std::vector<World> enumerate_worlds(const PDocument& doc, const WorldsOptions& opts = {});

/// ELCA nodes (indices into tree.nodes, ascending).
std::vector<int> det_elca(const DetTree& tree, std::span<const std::string> keywords);
/// SLCA nodes (indices into tree.nodes, ascending).
std::vector<int> det_slca(const DetTree& tree, std::span<const std::string> keywords);

/// Global probability per original ordinary node (nonzero entries only).
std::map<Dewey, double> oracle_prob(const PDocument& doc, std::span<const std::string> keywords,
                                    Semantics semantics, const WorldsOptions& opts = {});

/// Marginal probability that each original ordinary node exists.
std::map<Dewey, double> oracle_existence(const PDocument& doc, const WorldsOptions& opts = {});

/// Oracle output shaped like engine results (local = global / path
/// probability), sorted the same way.
std::vector<ElcaResult> oracle_results(const PDocument& doc,
                                       std::span<const std::string> keywords,
                                       Semantics semantics, const WorldsOptions& opts = {});

std::vector<std::string> label_path(const PDocument& doc, const Dewey& dewey);

}  // namespace pxq

#endif  // PXQ_WORLDS_HPP
