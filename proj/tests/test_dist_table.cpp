#include "doctest.h"

#include <functional>

#include "pxq/dist_table.hpp"
#include "pxq/gen.hpp"
#include "pxq/pdewey.hpp"

using namespace pxq;

namespace {

void check_dense(const DistTable& t, std::vector<double> want, double tol = 1e-12) {
  const std::vector<double> got = t.dense();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK_MESSAGE(std::abs(got[i] - want[i]) <= tol, "entry " << i << ": " << to_string(t));
  }
}

DistTable random_table(unsigned arity, Rng& rng) {
  std::vector<DistTable::Entry> e;
  double total = 0;
  for (Mask m = 0; m <= full_mask(arity); ++m) {
    if (rng.below(3) == 0) continue;
    const double w = rng.uniform() + 0.01;
    e.push_back({m, w});
    total += w;
  }
  if (e.empty()) return unit_table(arity);
  for (auto& x : e) x.prob /= total;
  return DistTable(arity, std::move(e));
}

struct Child {
  DistTable table;
  double lambda;
};

// Joint outcomes of independent children, listed explicitly: each child is
// absent, or present with one of its masks. `pass` maps a child's mask to
// what the parent sees.
std::vector<double> brute_independent(unsigned arity, const std::vector<Child>& kids,
                                      const std::function<Mask(Mask)>& pass) {
  std::vector<double> out(std::size_t{1} << arity, 0.0);
  std::function<void(std::size_t, Mask, double)> go = [&](std::size_t i, Mask acc, double p) {
    if (i == kids.size()) {
      out[acc] += p;
      return;
    }
    if (kids[i].lambda < 1.0) go(i + 1, acc, p * (1.0 - kids[i].lambda));
    for (const auto& [m, q] : kids[i].table.entries()) {
      go(i + 1, acc | pass(m), p * kids[i].lambda * q);
    }
  };
  go(0, 0, 1.0);
  return out;
}

std::vector<double> brute_exclusive(unsigned arity, const std::vector<Child>& kids) {
  std::vector<double> out(std::size_t{1} << arity, 0.0);
  double rest = 1.0;
  for (const Child& c : kids) {
    for (const auto& [m, q] : c.table.entries()) out[m] += c.lambda * q;
    rest -= c.lambda;
  }
  out[0] += rest;
  return out;
}

}  // namespace

TEST_CASE("construction normalizes entries") {
  const DistTable t(2, {{3, 0.25}, {1, 0.5}, {3, 0.25}, {2, 0.0}});
  CHECK(t.size() == 2);
  CHECK(t[3] == 0.5);
  CHECK(t[2] == 0.0);
  CHECK(t.sum() == 1.0);
  CHECK_THROWS_AS(DistTable(2, {{4, 1.0}}), TableError);
  CHECK_THROWS_AS(DistTable(kMaxArity + 1), TableError);
  CHECK(unit_table(3).dense() == std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(leaf_table(2, 2).dense() == std::vector<double>{0, 0, 1, 0});
}

TEST_CASE("IND node with two leaves") {
  // Leaves matching a and b under an IND node, edges 0.6 and 0.7.
  DistTable t = unit_table(2);
  t = merge_ordinary(t, ind_standardize(leaf_table(2, 1), 0.6));
  t = merge_ordinary(t, ind_standardize(leaf_table(2, 2), 0.7));
  check_dense(t, {0.12, 0.18, 0.28, 0.42});
}

TEST_CASE("MUX node with two leaves") {
  DistTable t = unit_table(2);
  t = merge_mux(t, leaf_table(2, 1), 0.5);
  t = merge_mux(t, leaf_table(2, 2), 0.4);
  check_dense(t, {0.1, 0.5, 0.4, 0.0});
  CHECK_THROWS_AS(merge_mux(unit_table(2), leaf_table(2, 1), 0.0), TableError);
  CHECK_THROWS_AS(merge_mux(unit_table(2), leaf_table(2, 1), 1.5), TableError);
}

TEST_CASE("screening moves the full mask to the empty mask") {
  const DistTable t(2, {{0, 0.0}, {1, 0.3}, {3, 0.7}});
  check_dense(elca_modify(t), {0.7, 0.3, 0.0, 0.0});
  check_dense(strip_full(t), {0.0, 0.3, 0.0, 0.0});
  CHECK(contributing(3, 2) == 0);
  CHECK(contributing(2, 2) == 2);
  // x2 after folding x1: its a1 match plus x1's screened contribution.
  const DistTable x1(2, {{0, 0.12}, {1, 0.18}, {2, 0.28}, {3, 0.42}});
  DistTable x2_elca = leaf_table(2, 1);
  x2_elca = merge_elca(x2_elca, x1);
  check_dense(x2_elca, {0.0, 0.72, 0.0, 0.28});
  check_dense(merge_elca(x2_elca, leaf_table(2, 2)), {0, 0, 0, 1});
}

TEST_CASE("ordinary and IND merges agree with explicit enumeration") {
  Rng rng(4242);
  for (int iter = 0; iter < 300; ++iter) {
    const auto arity = static_cast<unsigned>(1 + rng.below(4));
    const std::size_t n = 1 + rng.below(4);
    std::vector<Child> kids;
    DistTable acc = unit_table(arity);
    DistTable elca = unit_table(arity);
    for (std::size_t i = 0; i < n; ++i) {
      const double lambda = rng.below(3) == 0 ? 1.0 : prob_from_micros(rng.between(1, kMicro));
      kids.push_back({random_table(arity, rng), lambda});
      acc = merge_ordinary(acc, ind_standardize(kids.back().table, lambda));
      elca = merge_ordinary(elca, ind_standardize(elca_modify(kids.back().table), lambda));
    }
    const Mask full = full_mask(arity);
    const auto want = brute_independent(arity, kids, [](Mask m) { return m; });
    const auto want_elca =
        brute_independent(arity, kids, [full](Mask m) { return m == full ? Mask{0} : m; });
    for (Mask m = 0; m <= full; ++m) {
      REQUIRE(acc[m] == doctest::Approx(want[m]).epsilon(1e-12));
      REQUIRE(elca[m] == doctest::Approx(want_elca[m]).epsilon(1e-12));
    }
    REQUIRE(acc.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("MUX merge agrees with explicit enumeration") {
  Rng rng(99);
  for (int iter = 0; iter < 300; ++iter) {
    const auto arity = static_cast<unsigned>(1 + rng.below(4));
    const std::size_t n = 1 + rng.below(4);
    std::vector<Child> kids;
    std::int64_t budget = kMicro;
    DistTable acc = unit_table(arity);
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      const std::int64_t micros = rng.between(1, budget);
      budget -= micros;
      kids.push_back({random_table(arity, rng), prob_from_micros(micros)});
      acc = merge_mux(acc, kids.back().table, kids.back().lambda);
    }
    const auto want = brute_exclusive(arity, kids);
    for (Mask m = 0; m <= full_mask(arity); ++m) {
      REQUIRE(acc[m] == doctest::Approx(want[m]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("merging is order independent") {
  Rng rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    const DistTable a = random_table(3, rng), b = random_table(3, rng), c = random_table(3, rng);
    const DistTable abc = merge_ordinary(merge_ordinary(a, b), c);
    const DistTable cba = merge_ordinary(merge_ordinary(c, b), a);
    for (Mask m = 0; m < 8; ++m) REQUIRE(abc[m] == doctest::Approx(cba[m]).epsilon(1e-12));
  }
}
