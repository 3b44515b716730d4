// Corpus generation: probabilistic injection into deterministic documents
// and small random p-documents for oracle testing.
//
// All randomness comes from Rng, a 64-bit linear congruential generator
// with Knuth's MMIX constants
//
//   state' = state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
//
// seeded with the user seed. Each 32-bit draw is the high half of the next
// state. Every derived quantity (bounded integers, probabilities on the
// 6-decimal grid) is computed from those draws with integer arithmetic, so
// identical seeds give byte-identical documents.

#ifndef PXQ_GEN_HPP
#define PXQ_GEN_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pxq/model.hpp"

namespace pxq {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : lcg_(seed) {}

  std::uint32_t next32() { return static_cast<std::uint32_t>(lcg_() >> 32); }
  /// Uniform in [0, n); n must be in [1, 2^32].
  std::uint64_t below(std::uint64_t n) {
    return (static_cast<std::uint64_t>(next32()) * n) >> 32;
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next32();
    const std::uint64_t lo = next32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                  1442695040888963407ULL, 0>
      lcg_;
};

struct GenConfig {
  std::uint64_t seed = 1;
  double ind_fraction = 0.3;  // target share of IND nodes in the output
  double mux_fraction = 0.3;  // target share of MUX nodes in the output
  double prob_lo = 0.1;
  double prob_hi = 1.0;
};

/// Throws Error when the configuration is inconsistent.
void check_config(const GenConfig& cfg);

/// Inserts IND/MUX nodes into a deterministic document. Visiting ordinary
/// nodes in preorder, each internal node receives a number of new
/// distributional nodes, each adopting a random contiguous run of the
/// node's current children (possibly earlier distributional nodes, which
/// yields nested choices). Adopted children get random edge probabilities
/// on the 6-decimal grid; under a MUX they are scaled down so their sum
/// stays at most 1.
PDocument inject(const PDocument& det_doc, const GenConfig& cfg);

/// Random valid p-document with at most `max_nodes` nodes, of which at most
/// `max_dist_nodes` are distributional. Ordinary labels (and occasional
/// text) are drawn from `alphabet`.
PDocument random_small_doc(std::uint64_t seed, std::size_t max_nodes,
                           std::size_t max_dist_nodes,
                           const std::vector<std::string>& alphabet);

/// Deterministic document of exactly `nodes` ordinary nodes shaped as a
/// random recursive tree. Labels and text words come from a 64-word
/// vocabulary "w0".."w63" with a skewed (roughly log-uniform) distribution.
PDocument synthetic_det_doc(std::uint64_t seed, std::size_t nodes);

}  // namespace pxq

#endif  // PXQ_GEN_HPP
