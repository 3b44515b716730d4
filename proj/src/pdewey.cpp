#include "pxq/pdewey.hpp"

#include <charconv>
#include <cmath>

namespace pxq {

std::int64_t quantize_prob(double p) {
  return static_cast<std::int64_t>(std::llround(p * static_cast<double>(kMicro)));
}

double prob_from_micros(std::int64_t micros) {
  return static_cast<double>(micros) / static_cast<double>(kMicro);
}

std::string format_micros(std::int64_t micros) {
  std::string out;
  if (micros < 0) {
    out += '-';
    micros = -micros;
  }
  out += std::to_string(micros / kMicro);
  std::int64_t frac = micros % kMicro;
  if (frac != 0) {
    char digits[7];
    for (int i = 5; i >= 0; --i) {
      digits[i] = static_cast<char>('0' + frac % 10);
      frac /= 10;
    }
    int len = 6;
    while (digits[len - 1] == '0') --len;
    out += '.';
    out.append(digits, static_cast<std::size_t>(len));
  }
  return out;
}

std::int64_t parse_micros(std::string_view text) {
  const auto bad = [&] {
    return CodecError("malformed decimal '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();
  const std::size_t dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  if (whole.empty()) throw bad();
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), value);
  if (ec != std::errc{} || ptr != whole.data() + whole.size() || value < 0) throw bad();
  value *= kMicro;
  if (dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 6) throw bad();
    std::int64_t scale = kMicro;
    for (char ch : frac) {
      if (ch < '0' || ch > '9') throw bad();
      scale /= 10;
      value += (ch - '0') * scale;
    }
  }
  return value;
}

std::string format_prob(double p) { return format_micros(quantize_prob(p)); }

PDeweyCode encode_pdewey(std::span<const std::uint32_t> components,
                         std::span<const double> probs) {
  if (components.size() != probs.size()) {
    throw CodecError("component and probability lists differ in length");
  }
  PDeweyCode code;
  code.fields.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const std::int64_t p = quantize_prob(probs[i]);
    if (!(probs[i] > 0.0) || p <= 0 || p > kMicro) {
      throw CodecError("probability outside (0,1]");
    }
    code.fields.push_back(static_cast<std::int64_t>(components[i]) * kMicro + p);
  }
  return code;
}

std::pair<std::uint32_t, std::int64_t> decode_field(std::int64_t field) {
  if (field <= 0) throw CodecError("malformed pDewey field");
  const std::int64_t ceil = (field + kMicro - 1) / kMicro;
  const std::int64_t component = ceil - 1;
  return {static_cast<std::uint32_t>(component), field - component * kMicro};
}

DecodedPDewey decode_pdewey(const PDeweyCode& code) {
  DecodedPDewey out;
  out.components.reserve(code.fields.size());
  out.probs.reserve(code.fields.size());
  for (std::int64_t field : code.fields) {
    auto [component, micros] = decode_field(field);
    out.components.push_back(component);
    out.probs.push_back(prob_from_micros(micros));
  }
  return out;
}

std::string to_string(const PDeweyCode& code) {
  std::string s;
  for (std::size_t i = 0; i < code.fields.size(); ++i) {
    if (i) s += ',';
    s += format_micros(code.fields[i]);
  }
  return s;
}

PDeweyCode parse_pdewey(std::string_view text) {
  PDeweyCode code;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::int64_t field = parse_micros(text.substr(start, comma - start));
    if (field <= 0) throw CodecError("malformed pDewey field");
    code.fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return code;
}

}  // namespace pxq
