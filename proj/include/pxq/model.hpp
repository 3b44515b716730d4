// In-memory p-documents under the PrXML{ind,mux} model.

#ifndef PXQ_MODEL_HPP
#define PXQ_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pxq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { ordinary, ind, mux };

/// One-letter code used by the postings file ("O", "I", "M").
char kind_code(NodeKind kind);
NodeKind kind_from_code(char code);
std::string_view kind_name(NodeKind kind);

inline bool is_distributional(NodeKind kind) { return kind != NodeKind::ordinary; }

/// A node of a p-document. `edge_prob` is the probability that this node
/// appears given that its parent does.
struct PNode {
  std::string label;
  NodeKind kind = NodeKind::ordinary;
  std::optional<std::string> text;
  double edge_prob = 1.0;
  std::vector<PNode> children;

  static PNode ordinary(std::string label, std::vector<PNode> children = {});
  static PNode distributional(NodeKind kind, std::vector<PNode> children = {});

  /// Fluent helpers used heavily by tests and fixtures.
  PNode&& with_prob(double p) &&;
  PNode&& with_text(std::string t) &&;
};

/// Dewey path of a node: the root is {1}, children are numbered from 1 and
/// distributional nodes take part in the numbering.
using Dewey = std::vector<std::uint32_t>;

std::string dewey_string(std::span<const std::uint32_t> dewey);

struct PDocument {
  PNode root;
  std::size_t node_count = 0;
  std::optional<int> max_keyword_arity_hint;
};

/// Wraps a root into a document and fills in `node_count`.
PDocument make_document(PNode root);

std::size_t count_nodes(const PNode& node);

struct Violation {
  std::string path;  // dotted Dewey path of the offending node
  std::string rule;
};

/// Checks every structural and probabilistic invariant of the model.
/// Violations are returned as data; an empty report means the document is
/// well formed.
std::vector<Violation> validate(const PDocument& doc);

/// Returns the node at `dewey`, or nullptr when the path does not resolve.
const PNode* find_node(const PDocument& doc, std::span<const std::uint32_t> dewey);

/// Product of edge probabilities along the root-to-node path, inclusive.
/// Throws Error("node not in document") for unresolvable paths.
double path_probability(const PDocument& doc, std::span<const std::uint32_t> dewey);

/// Calls `fn(node, dewey)` for every node in document order.
template <typename Fn>
void for_each_node(const PNode& node, Dewey& dewey, Fn&& fn) {
  fn(node, static_cast<const Dewey&>(dewey));
  std::uint32_t ordinal = 0;
  for (const PNode& child : node.children) {
    dewey.push_back(++ordinal);
    for_each_node(child, dewey, fn);
    dewey.pop_back();
  }
}

template <typename Fn>
void for_each_node(const PDocument& doc, Fn&& fn) {
  Dewey dewey{1};
  for_each_node(doc.root, dewey, fn);
}

/// Structural equality; probabilities are compared after 6-decimal
/// quantization.
bool same_structure(const PNode& a, const PNode& b);

}  // namespace pxq

#endif  // PXQ_MODEL_HPP
