// pDewey codes: Dewey components fused with edge probabilities.
//
// A field y stores component c and probability p as y = c + p with
// p in (0,1], so c = ceil(y) - 1 and p = y + 1 - ceil(y). Probabilities live
// on a 6-decimal grid and fields are held as exact integers in millionths,
// which makes encode/decode bit-exact and keeps ceil() unambiguous when p = 1.

#ifndef PXQ_PDEWEY_HPP
#define PXQ_PDEWEY_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pxq/model.hpp"

namespace pxq {

class CodecError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::int64_t kMicro = 1'000'000;

/// Rounds a probability onto the 6-decimal grid (in millionths).
std::int64_t quantize_prob(double p);
double prob_from_micros(std::int64_t micros);

/// Renders a millionths value as a plain decimal ("3.9", "1", "0.000001").
std::string format_micros(std::int64_t micros);
/// Exact inverse of format_micros; accepts at most 6 fractional digits.
std::int64_t parse_micros(std::string_view text);

/// Formats a probability with up to 6 decimals and no exponent.
std::string format_prob(double p);

struct PDeweyCode {
  std::vector<std::int64_t> fields;  // millionths

  // Lexicographic order on fields equals document order: field ranges of
  // distinct components never overlap.
  auto operator<=>(const PDeweyCode&) const = default;
};

/// `probs` must already include the dummy probability 1 for the root.
PDeweyCode encode_pdewey(std::span<const std::uint32_t> components,
                         std::span<const double> probs);

struct DecodedPDewey {
  Dewey components;
  std::vector<double> probs;
};

DecodedPDewey decode_pdewey(const PDeweyCode& code);

/// Decodes one field into (component, probability in millionths).
std::pair<std::uint32_t, std::int64_t> decode_field(std::int64_t field);

std::string to_string(const PDeweyCode& code);  // "2,3.9,7,9.7"
PDeweyCode parse_pdewey(std::string_view text);

}  // namespace pxq

#endif  // PXQ_PDEWEY_HPP
