// PrXML interchange format: plain XML where reserved elements mark IND and
// MUX nodes and an attribute carries the edge probability.
//
//   <r><ind><x p="0.8">hello</x></ind></r>
//
// Attributes of ordinary elements become child nodes labeled with the
// attribute name whose text is the attribute value. Character data of an
// element is trimmed and joined into that node's text.

#ifndef PXQ_FORMAT_HPP
#define PXQ_FORMAT_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "pxq/model.hpp"

namespace pxq {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

struct FormatOptions {
  std::string ind_tag = "ind";
  std::string mux_tag = "mux";
  std::string prob_attr = "p";
};

PDocument parse_pxml(std::string_view text, const FormatOptions& opts = {});
std::string serialize_pxml(const PDocument& doc, const FormatOptions& opts = {});

PDocument read_pxml_file(const std::string& path, const FormatOptions& opts = {});
void write_pxml_file(const std::string& path, const PDocument& doc,
                     const FormatOptions& opts = {});

}  // namespace pxq

#endif  // PXQ_FORMAT_HPP
