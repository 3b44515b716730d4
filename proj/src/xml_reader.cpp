#include "xml_reader.hpp"

#include <cstdint>

#include "pxq/format.hpp"

namespace pxq::xml {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  Element document() {
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    Element root = element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_.line, pos_.column);
  }

  bool at_end() const { return i_ >= in_.size(); }
  char peek() const { return in_[i_]; }
  bool starts_with(std::string_view s) const { return in_.substr(i_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < in_.size(); ++k, ++i_) {
      if (in_[i_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
    }
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    const std::size_t end = in_.find(terminator, i_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    advance(end - i_ + terminator.size());
  }

  // Whitespace, comments, processing instructions and a DOCTYPE.
  void skip_misc() {
    while (true) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        if (in_.find('[', i_) < in_.find('>', i_)) fail("DOCTYPE internal subset not supported");
        skip_until(">", "DOCTYPE");
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    const std::size_t start = i_;
    while (!at_end() && is_name_char(peek())) advance();
    return std::string(in_.substr(start, i_ - start));
  }

  void reference(std::string& out) {
    const Position at = pos_;
    advance();  // '&'
    const std::size_t semi = in_.find(';', i_);
    if (semi == std::string_view::npos || semi - i_ > 10) {
      throw ParseError("unterminated entity reference", at.line, at.column);
    }
    const std::string_view ref = in_.substr(i_, semi - i_);
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref[1] == 'x';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) throw ParseError("bad character reference", at.line, at.column);
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw ParseError("bad character reference", at.line, at.column);
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) throw ParseError("bad character reference", at.line, at.column);
      }
      append_utf8(out, cp);
    } else {
      throw ParseError("unknown entity '&" + std::string(ref) + ";'", at.line, at.column);
    }
    advance(ref.size() + 1);
  }

  std::string attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = peek();
    advance();
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated attribute value");
      const char c = peek();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        reference(value);
      } else {
        value += c;
        advance();
      }
    }
    advance();
    return value;
  }

  Element element() {
    Element el;
    el.position = pos_;
    expect("<");
    el.name = name();
    while (true) {
      const bool had_space = !at_end() && is_space(peek());
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      std::string key = name();
      for (const auto& [k, v] : el.attributes) {
        if (k == key) fail("duplicate attribute '" + key + "'");
      }
      skip_space();
      expect("=");
      skip_space();
      el.attributes.emplace_back(std::move(key), attribute_value());
    }

    std::string run;
    auto flush = [&] {
      const std::string_view t = trim(run);
      if (!t.empty()) el.text.emplace_back(t);
      run.clear();
    };
    while (true) {
      if (at_end()) fail("unterminated element '" + el.name + "'");
      if (starts_with("</")) {
        flush();
        advance(2);
        const std::string closing = name();
        if (closing != el.name) {
          fail("mismatched end tag: expected '" + el.name + "', found '" + closing + "'");
        }
        skip_space();
        expect(">");
        return el;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        const std::size_t end = in_.find("]]>", i_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        run.append(in_.substr(i_, end - i_));
        advance(end - i_ + 3);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        flush();
        el.children.push_back(element());
      } else if (peek() == '&') {
        reference(run);
      } else {
        run += peek();
        advance();
      }
    }
  }

  std::string_view in_;
  std::size_t i_ = 0;
  Position pos_;
};

}  // namespace

Element parse(std::string_view input) { return Reader(input).document(); }

std::string escape(std::string_view text, bool in_attribute) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (in_attribute) out += "&quot;";
        else out += c;
        break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace pxq::xml
