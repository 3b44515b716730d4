#include "pxq/index.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace pxq {

namespace {

constexpr std::string_view kHeader = "#pxq-index v1 nodes=";
constexpr std::string_view kLabelPrefix = "#label\t";

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

struct Builder {
  InvertedIndex::Lists lists;
  std::map<Dewey, std::string> labels;
  Dewey components{1};
  std::vector<double> probs{1.0};
  std::vector<NodeKind> kinds;

  void visit(const PNode& node) {
    kinds.push_back(node.kind);
    if (node.kind == NodeKind::ordinary) {
      const std::set<std::string> tokens = tokenize(node);
      if (!tokens.empty()) {
        const PDeweyCode code = encode_pdewey(components, probs);
        for (const std::string& token : tokens) {
          lists[token].push_back(Posting{code, kinds});
        }
      }
      labels.emplace(components, node.label);
    }
    std::uint32_t ordinal = 0;
    for (const PNode& child : node.children) {
      components.push_back(++ordinal);
      probs.push_back(child.edge_prob);
      visit(child);
      probs.pop_back();
      components.pop_back();
    }
    kinds.pop_back();
  }
};

Dewey parse_dotted(std::string_view text) {
  Dewey out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view part = text.substr(start, dot - start);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw IndexError("malformed dewey '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::set<std::string> tokenize(const PNode& node) {
  std::set<std::string> out;
  for (std::string& t : tokenize_text(node.label)) out.insert(std::move(t));
  if (node.text) {
    for (std::string& t : tokenize_text(*node.text)) out.insert(std::move(t));
  }
  return out;
}

InvertedIndex::InvertedIndex(Lists lists, std::map<Dewey, std::string> labels,
                             std::size_t node_count)
    : lists_(std::move(lists)), labels_(std::move(labels)), node_count_(node_count) {}

std::span<const Posting> InvertedIndex::lookup(std::string_view keyword) const {
  auto it = lists_.find(keyword);
  if (it == lists_.end()) return {};
  return it->second;
}

std::size_t InvertedIndex::posting_count() const {
  std::size_t n = 0;
  for (const auto& [k, list] : lists_) n += list.size();
  return n;
}

const std::string* InvertedIndex::label(const Dewey& dewey) const {
  auto it = labels_.find(dewey);
  return it == labels_.end() ? nullptr : &it->second;
}

InvertedIndex build_index(const PDocument& doc) {
  Builder b;
  b.visit(doc.root);
  return InvertedIndex(std::move(b.lists), std::move(b.labels), doc.node_count);
}

std::span<const Posting> lookup(const InvertedIndex& index, std::string_view keyword) {
  return index.lookup(keyword);
}

void write_index(std::ostream& out, const InvertedIndex& index) {
  out << kHeader << index.node_count() << '\n';
  for (const auto& [keyword, list] : index.lists()) {
    for (const Posting& p : list) {
      out << keyword << '\t' << to_string(p.code) << '\t';
      for (NodeKind k : p.kinds) out << kind_code(k);
      out << '\n';
    }
  }
  for (const auto& [dewey, label] : index.labels()) {
    if (label.find_first_of("\t\n\r") != std::string::npos) {
      throw IndexError("label with control whitespace cannot be stored: '" + label + "'");
    }
    out << kLabelPrefix << dewey_string(dewey) << '\t' << label << '\n';
  }
}

InvertedIndex read_index(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) {
    throw IndexError("missing postings file header");
  }
  std::size_t nodes = 0;
  {
    const std::string_view n = std::string_view(line).substr(kHeader.size());
    auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), nodes);
    if (ec != std::errc{} || ptr != n.data() + n.size()) {
      throw IndexError("malformed postings file header");
    }
  }

  InvertedIndex::Lists lists;
  std::map<Dewey, std::string> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string_view sv = line;
    const auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
    if (sv.rfind(kLabelPrefix, 0) == 0) {
      const std::string_view rest = sv.substr(kLabelPrefix.size());
      const std::size_t tab = rest.find('\t');
      if (tab == std::string_view::npos) throw IndexError("malformed label line" + where());
      labels.emplace(parse_dotted(rest.substr(0, tab)), std::string(rest.substr(tab + 1)));
      continue;
    }
    if (sv.front() == '#') continue;

    const std::size_t t1 = sv.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : sv.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw IndexError("malformed posting line" + where());
    Posting p;
    try {
      p.code = parse_pdewey(sv.substr(t1 + 1, t2 - t1 - 1));
      for (char c : sv.substr(t2 + 1)) p.kinds.push_back(kind_from_code(c));
    } catch (const Error& e) {
      throw IndexError(std::string(e.what()) + where());
    }
    if (p.kinds.size() != p.code.fields.size() || p.kinds.back() != NodeKind::ordinary) {
      throw IndexError("kinds vector does not match code" + where());
    }
    auto& list = lists[std::string(sv.substr(0, t1))];
    if (!list.empty() && !(list.back().code < p.code)) {
      throw IndexError("postings out of document order" + where());
    }
    list.push_back(std::move(p));
  }
  return InvertedIndex(std::move(lists), std::move(labels), nodes);
}

void write_index_file(const std::string& path, const InvertedIndex& index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_index(out, index);
  if (!out) throw Error("write failed for '" + path + "'");
}

InvertedIndex read_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_index(in);
}

bool looks_like_index(std::istream& in) {
  std::string head(kHeader.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  const bool ok = in.gcount() == static_cast<std::streamsize>(head.size()) && head == kHeader;
  in.clear();
  in.seekg(0);
  return ok;
}

}  // namespace pxq
