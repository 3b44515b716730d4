// Small non-validating XML reader producing an element tree.
//
// Supports elements, attributes, character data, CDATA sections, comments,
// processing instructions, a DOCTYPE without internal subset, the five
// predefined entities and numeric character references.

#ifndef PXQ_XML_READER_HPP
#define PXQ_XML_READER_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pxq::xml {

struct Position {
  int line = 1;
  int column = 1;
};

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  // Non-blank character-data runs, trimmed, in document order.
  std::vector<std::string> text;
  Position position;
};

/// Throws pxq::ParseError on malformed input.
Element parse(std::string_view input);

std::string escape(std::string_view text, bool in_attribute);

}  // namespace pxq::xml

#endif  // PXQ_XML_READER_HPP
