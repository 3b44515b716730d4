// Keyword inverted lists over a p-document.
//
// Every ordinary node is indexed under each token of its label and text.
// A posting identifies the node by its pDewey code and carries the kinds of
// all nodes on the root-to-node path, so a query can rebuild the path
// (components, edge probabilities, node kinds) without the document.
//
// Postings file layout (text, one record per line):
//
//   #pxq-index v1 nodes=<N>
//   <keyword> TAB <pdewey fields, comma separated> TAB <kinds, one of O/I/M per node>
//   ...
//   #label TAB <dotted dewey> TAB <label>
//
// Posting lines are grouped by keyword (ascending) and in document order
// within a keyword. Label lines name every indexed ordinary node.

#ifndef PXQ_INDEX_HPP
#define PXQ_INDEX_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pxq/model.hpp"
#include "pxq/pdewey.hpp"

namespace pxq {

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Lowercased tokens of `text`, split on anything that is not an ASCII
/// letter or digit. Bytes >= 0x80 are kept as part of tokens.
std::vector<std::string> tokenize_text(std::string_view text);

/// Tokens of an ordinary node's label and text.
std::set<std::string> tokenize(const PNode& node);

struct Posting {
  PDeweyCode code;
  std::vector<NodeKind> kinds;  // one per path node; last is ordinary

  bool operator==(const Posting&) const = default;
};

class InvertedIndex {
 public:
  using Lists = std::map<std::string, std::vector<Posting>, std::less<>>;

  InvertedIndex() = default;
  InvertedIndex(Lists lists, std::map<Dewey, std::string> labels, std::size_t node_count);

  /// The stored list, or an empty span for unknown keywords.
  std::span<const Posting> lookup(std::string_view keyword) const;

  const Lists& lists() const { return lists_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t posting_count() const;

  /// Label of an ordinary node, when known.
  const std::string* label(const Dewey& dewey) const;
  const std::map<Dewey, std::string>& labels() const { return labels_; }

  bool operator==(const InvertedIndex&) const = default;

 private:
  Lists lists_;
  std::map<Dewey, std::string> labels_;
  std::size_t node_count_ = 0;
};

InvertedIndex build_index(const PDocument& doc);

std::span<const Posting> lookup(const InvertedIndex& index, std::string_view keyword);

void write_index(std::ostream& out, const InvertedIndex& index);
InvertedIndex read_index(std::istream& in);

void write_index_file(const std::string& path, const InvertedIndex& index);
InvertedIndex read_index_file(const std::string& path);

/// True when the stream starts with the postings file header.
bool looks_like_index(std::istream& in);

}  // namespace pxq

#endif  // PXQ_INDEX_HPP
