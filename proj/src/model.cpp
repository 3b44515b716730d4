#include "pxq/model.hpp"

#include <cmath>

#include "pxq/pdewey.hpp"

namespace pxq {

namespace {

constexpr double kMuxSlack = 1e-12;

void validate_node(const PNode& node, const PNode* parent, Dewey& dewey,
                   std::vector<Violation>& out) {
  auto report = [&](std::string rule) {
    out.push_back({dewey_string(dewey), std::move(rule)});
  };

  if (!(node.edge_prob > 0.0 && node.edge_prob <= 1.0)) {
    report("edge probability outside (0,1]");
  }
  if (parent == nullptr) {
    if (node.kind != NodeKind::ordinary) report("root must be ordinary");
    if (node.edge_prob != 1.0) report("root edge must be 1");
  } else if (parent->kind == NodeKind::ordinary && node.edge_prob != 1.0) {
    report("ordinary edge must be 1");
  }
  if (is_distributional(node.kind)) {
    if (!node.label.empty() || node.text) {
      report("distributional node carries label or text");
    }
  }
  if (node.kind == NodeKind::mux) {
    double sum = 0.0;
    for (const PNode& child : node.children) sum += child.edge_prob;
    if (sum > 1.0 + kMuxSlack) report("MUX sum > 1");
  }

  std::uint32_t ordinal = 0;
  for (const PNode& child : node.children) {
    dewey.push_back(++ordinal);
    validate_node(child, &node, dewey, out);
    dewey.pop_back();
  }
}

}  // namespace

char kind_code(NodeKind kind) {
  switch (kind) {
    case NodeKind::ordinary: return 'O';
    case NodeKind::ind: return 'I';
    case NodeKind::mux: return 'M';
  }
  return '?';
}

NodeKind kind_from_code(char code) {
  switch (code) {
    case 'O': return NodeKind::ordinary;
    case 'I': return NodeKind::ind;
    case 'M': return NodeKind::mux;
    default: throw Error(std::string("unknown node kind code '") + code + "'");
  }
}

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::ordinary: return "ORDINARY";
    case NodeKind::ind: return "IND";
    case NodeKind::mux: return "MUX";
  }
  return "?";
}

PNode PNode::ordinary(std::string label, std::vector<PNode> children) {
  PNode n;
  n.label = std::move(label);
  n.children = std::move(children);
  return n;
}

PNode PNode::distributional(NodeKind kind, std::vector<PNode> children) {
  PNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

PNode&& PNode::with_prob(double p) && {
  edge_prob = p;
  return std::move(*this);
}

PNode&& PNode::with_text(std::string t) && {
  text = std::move(t);
  return std::move(*this);
}

std::string dewey_string(std::span<const std::uint32_t> dewey) {
  std::string s;
  for (std::size_t i = 0; i < dewey.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(dewey[i]);
  }
  return s;
}

std::size_t count_nodes(const PNode& node) {
  std::size_t n = 1;
  for (const PNode& c : node.children) n += count_nodes(c);
  return n;
}

PDocument make_document(PNode root) {
  PDocument doc;
  doc.node_count = count_nodes(root);
  doc.root = std::move(root);
  return doc;
}

std::vector<Violation> validate(const PDocument& doc) {
  std::vector<Violation> out;
  Dewey dewey{1};
  validate_node(doc.root, nullptr, dewey, out);
  if (doc.node_count != count_nodes(doc.root)) {
    out.push_back({"1", "node_count does not match tree size"});
  }
  return out;
}

const PNode* find_node(const PDocument& doc, std::span<const std::uint32_t> dewey) {
  if (dewey.empty() || dewey[0] != 1) return nullptr;
  const PNode* node = &doc.root;
  for (std::size_t i = 1; i < dewey.size(); ++i) {
    const std::uint32_t ordinal = dewey[i];
    if (ordinal == 0 || ordinal > node->children.size()) return nullptr;
    node = &node->children[ordinal - 1];
  }
  return node;
}

double path_probability(const PDocument& doc, std::span<const std::uint32_t> dewey) {
  if (dewey.empty() || dewey[0] != 1) throw Error("node not in document");
  const PNode* node = &doc.root;
  double p = node->edge_prob;
  for (std::size_t i = 1; i < dewey.size(); ++i) {
    const std::uint32_t ordinal = dewey[i];
    if (ordinal == 0 || ordinal > node->children.size()) {
      throw Error("node not in document");
    }
    node = &node->children[ordinal - 1];
    p *= node->edge_prob;
  }
  return p;
}

bool same_structure(const PNode& a, const PNode& b) {
  if (a.label != b.label || a.kind != b.kind || a.text != b.text) return false;
  if (quantize_prob(a.edge_prob) != quantize_prob(b.edge_prob)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(a.children[i], b.children[i])) return false;
  }
  return true;
}

}  // namespace pxq
