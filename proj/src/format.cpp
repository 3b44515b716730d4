#include "pxq/format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pxq/pdewey.hpp"
#include "xml_reader.hpp"

namespace pxq {

ParseError::ParseError(const std::string& what, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            what),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void format_fail(const xml::Element& el, const std::string& msg) {
  throw FormatError("line " + std::to_string(el.position.line) + ", column " +
                    std::to_string(el.position.column) + ": " + msg);
}

double parse_prob(const xml::Element& el, const std::string& value) {
  double p = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc{} || ptr != last) {
    format_fail(el, "malformed probability '" + value + "'");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    format_fail(el, "probability " + value + " outside (0,1]");
  }
  return p;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

PNode convert(const xml::Element& el, const PNode* parent, const FormatOptions& opts) {
  PNode node;
  if (el.name == opts.ind_tag) node.kind = NodeKind::ind;
  else if (el.name == opts.mux_tag) node.kind = NodeKind::mux;
  else node.label = el.name;

  if (parent == nullptr && node.kind != NodeKind::ordinary) {
    format_fail(el, "root must be an ordinary element");
  }

  for (const auto& [key, value] : el.attributes) {
    if (key == opts.prob_attr) {
      node.edge_prob = parse_prob(el, value);
      if (node.edge_prob != 1.0 && (parent == nullptr || parent->kind == NodeKind::ordinary)) {
        format_fail(el, "probability " + value + " on a child of an ordinary node");
      }
    } else if (node.kind != NodeKind::ordinary) {
      format_fail(el, "distributional element carries attribute '" + key + "'");
    } else {
      node.children.push_back(PNode::ordinary(key).with_text(value));
    }
  }

  if (!el.text.empty()) {
    if (node.kind != NodeKind::ordinary) format_fail(el, "distributional element carries text");
    node.text = join(el.text);
  }

  node.children.reserve(node.children.size() + el.children.size());
  for (const xml::Element& child : el.children) {
    node.children.push_back(convert(child, &node, opts));
  }

  if (node.kind == NodeKind::mux) {
    double sum = 0.0;
    for (const PNode& c : node.children) sum += c.edge_prob;
    if (sum > 1.0 + 1e-12) format_fail(el, "MUX sum " + format_prob(sum) + " > 1");
  }
  return node;
}

void check_options(const FormatOptions& opts) {
  if (opts.ind_tag.empty() || opts.mux_tag.empty() || opts.prob_attr.empty() ||
      opts.ind_tag == opts.mux_tag || opts.ind_tag == opts.prob_attr ||
      opts.mux_tag == opts.prob_attr) {
    throw FormatError("format option names must be distinct and nonempty");
  }
}

void write_node(const PNode& node, int depth, const FormatOptions& opts, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string& tag = node.kind == NodeKind::ind   ? opts.ind_tag
                           : node.kind == NodeKind::mux ? opts.mux_tag
                                                        : node.label;
  out += '<';
  out += tag;
  if (quantize_prob(node.edge_prob) != kMicro) {
    out += ' ';
    out += opts.prob_attr;
    out += "=\"";
    out += format_prob(node.edge_prob);
    out += '"';
  }
  if (!node.text && node.children.empty()) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (node.text) out += xml::escape(*node.text, false);
  if (!node.children.empty()) {
    out += '\n';
    for (const PNode& child : node.children) write_node(child, depth + 1, opts, out);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
  }
  out += "</";
  out += tag;
  out += ">\n";
}

}  // namespace

PDocument parse_pxml(std::string_view text, const FormatOptions& opts) {
  check_options(opts);
  const xml::Element root = xml::parse(text);
  PDocument doc = make_document(convert(root, nullptr, opts));
  const auto violations = validate(doc);
  if (!violations.empty()) {
    throw FormatError("node " + violations.front().path + ": " + violations.front().rule);
  }
  return doc;
}

std::string serialize_pxml(const PDocument& doc, const FormatOptions& opts) {
  check_options(opts);
  std::string out;
  write_node(doc.root, 0, opts, out);
  return out;
}

PDocument read_pxml_file(const std::string& path, const FormatOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pxml(buf.str(), opts);
}

void write_pxml_file(const std::string& path, const PDocument& doc, const FormatOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize_pxml(doc, opts);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace pxq
