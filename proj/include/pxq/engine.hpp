// Stack-based evaluation of probabilistic ELCA (and SLCA) keyword queries.
//
// The engine reads the keyword inverted lists once, merged in document
// order, and mimics a postorder traversal of the p-document: a stack holds
// the current root-to-node path, and when a node can no longer receive
// descendants it is popped, its tables are finalized and folded into its
// parent. No possible world is ever materialized.
//
// Each stack entry carries two tables:
//   dist  keyword distribution of the subtree merged so far;
//   acc   the semantics-specific accumulator. For ELCA it is the
//         distribution of the union of contributing keyword sets of the
//         node's (possible-world) children; for SLCA it is the same union
//         restricted to outcomes in which no child covers every keyword.
//
// A distributional node is transparent in every possible world: its
// ordinary descendants become children of the nearest ordinary ancestor.
// Its accumulator is therefore passed upward as-is, while an ordinary
// child passes its distribution through the contributing-set screen.

#ifndef PXQ_ENGINE_HPP
#define PXQ_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pxq/dist_table.hpp"
#include "pxq/index.hpp"
#include "pxq/model.hpp"

namespace pxq {

class QueryError : public Error {
 public:
  using Error::Error;
};

enum class Semantics { elca, slca };

std::string_view semantics_name(Semantics s);

struct StackEntry {
  std::uint32_t component = 0;
  NodeKind kind = NodeKind::ordinary;
  double edge_prob = 1.0;
  DistTable dist;
  DistTable acc;
  Mask self_mask = 0;
};

struct ElcaResult {
  Dewey dewey;
  std::vector<std::string> label_path;
  double local_prob = 0.0;
  double global_prob = 0.0;
};

/// Snapshot handed to QueryOptions::on_pop after each fold.
struct PopEvent {
  Dewey dewey;                // of the popped node
  const StackEntry& popped;   // finalized tables
  const DistTable& passed;    // what the popped node contributed to acc
  const StackEntry* parent;   // after folding; null when the root was popped
};

#ifdef NDEBUG
inline constexpr bool kCheckInvariantsByDefault = false;
#else
inline constexpr bool kCheckInvariantsByDefault = true;
#endif

struct QueryOptions {
  /// Verifies table normalization, ELCA accumulator monotonicity and path
  /// consistency at every pop; violations throw std::logic_error.
  bool check_invariants = kCheckInvariantsByDefault;
  std::function<void(const PopEvent&)> on_pop;
};

struct QueryStats {
  std::size_t postings_read = 0;
  std::size_t nodes_read = 0;  // distinct nodes after merging the lists
  std::size_t pops = 0;
  std::size_t max_depth = 0;
  std::size_t peak_bytes = 0;  // stack frames plus table entries
  std::size_t invariant_checks = 0;
};

/// Length of the longest common prefix between the stack path and `dewey`.
std::size_t lcp(std::span<const StackEntry> stack, std::span<const std::uint32_t> dewey);

/// Pops the top entry, finalizes its tables and folds them into the new top.
/// Returns a result when the popped node is ordinary with nonzero
/// probability; its label_path holds "" for ordinary nodes (filled in by
/// the caller) and "[ind]"/"[mux]" for distributional ones.
std::optional<ElcaResult> pop_and_fold(std::vector<StackEntry>& stack, Semantics semantics,
                                       const QueryOptions& opts = {},
                                       QueryStats* stats = nullptr);

/// All nodes with nonzero global probability, by probability descending
/// then Dewey ascending. Unknown keywords yield an empty result.
std::vector<ElcaResult> run_query(const InvertedIndex& index,
                                  std::span<const std::string> keywords, Semantics semantics,
                                  const QueryOptions& opts = {}, QueryStats* stats = nullptr);

std::vector<ElcaResult> prelca_query(const InvertedIndex& index,
                                     std::span<const std::string> keywords,
                                     const QueryOptions& opts = {},
                                     QueryStats* stats = nullptr);

std::vector<ElcaResult> prslca_query(const InvertedIndex& index,
                                     std::span<const std::string> keywords,
                                     const QueryOptions& opts = {},
                                     QueryStats* stats = nullptr);

void sort_results(std::vector<ElcaResult>& results);

/// `dewey TAB label_path TAB local_prob TAB global_prob`, 9 decimals.
void write_results_tsv(std::ostream& out, std::span<const ElcaResult> results);
void write_results_json(std::ostream& out, std::span<const ElcaResult> results);

}  // namespace pxq

#endif  // PXQ_ENGINE_HPP
