// Shared helpers for the test binaries.

#ifndef PXQ_TESTS_SUPPORT_HPP
#define PXQ_TESTS_SUPPORT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "pxq/engine.hpp"
#include "pxq/format.hpp"
#include "pxq/gen.hpp"
#include "pxq/index.hpp"
#include "pxq/model.hpp"
#include "pxq/worlds.hpp"

namespace pxq::test {

inline std::string data_path(const std::string& name) {
  return std::string(PXQ_DATA_DIR) + "/" + name;
}

inline PDocument fig2b() { return read_pxml_file(data_path("fig2b.xml")); }
inline PDocument fig2a() { return read_pxml_file(data_path("fig2a.xml")); }

// Dewey paths of the named nodes in fig2b.xml.
inline const Dewey kX2{1, 1, 1};
inline const Dewey kX1{1, 1, 1, 2};
inline const Dewey kInd2{1, 1, 1, 2, 1};
inline const Dewey kX3{1, 2};
inline const Dewey kX4{1, 2, 1};

// Random small document in the shape used by the equivalence corpus.
inline PDocument corpus_doc(std::uint64_t seed) {
  return random_small_doc(seed, 30, 10, {"a", "b", "c", "d"});
}

// Two or three keywords, chosen by seed.
inline std::vector<std::string> corpus_query(std::uint64_t seed) {
  static const std::vector<std::vector<std::string>> queries{
      {"a", "b"}, {"a", "b", "c"}, {"b", "c"}, {"a", "c", "d"}, {"c", "d"}};
  return queries[seed % queries.size()];
}

inline std::map<Dewey, double> as_map(const std::vector<ElcaResult>& results) {
  std::map<Dewey, double> out;
  for (const ElcaResult& r : results) out.emplace(r.dewey, r.global_prob);
  return out;
}

// Compares two node->probability maps; on mismatch returns a description.
inline std::string compare_maps(const std::map<Dewey, double>& got,
                                const std::map<Dewey, double>& want, double tol) {
  for (const auto& [d, p] : want) {
    auto it = got.find(d);
    if (it == got.end()) return "missing " + dewey_string(d) + " (" + std::to_string(p) + ")";
    if (std::abs(it->second - p) > tol) {
      return dewey_string(d) + ": got " + std::to_string(it->second) + ", want " +
             std::to_string(p);
    }
  }
  for (const auto& [d, p] : got) {
    if (!want.count(d)) return "extra " + dewey_string(d) + " (" + std::to_string(p) + ")";
  }
  return {};
}

}  // namespace pxq::test

#endif  // PXQ_TESTS_SUPPORT_HPP
