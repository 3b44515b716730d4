// Keyword distribution tables.
//
// For a query of n keywords, a table maps each keyword subset (a bitmask,
// bit i set <=> keyword i+1 present) to a probability. Tables are sparse:
// absent masks have probability 0 and entries are kept in ascending mask
// order.
//
// The same representation serves three roles:
//   * a node's keyword distribution: probability that its subtree realizes
//     exactly that keyword set (sums to 1);
//   * an ELCA accumulator: distribution of the union of contributing
//     keyword sets of the children merged so far (sums to 1);
//   * an SLCA accumulator: the same union restricted to outcomes where no
//     merged child covers every keyword (sums to at most 1).

#ifndef PXQ_DIST_TABLE_HPP
#define PXQ_DIST_TABLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pxq/model.hpp"

namespace pxq {

using Mask = std::uint32_t;

inline constexpr unsigned kMaxArity = 16;

/// Entries whose magnitude falls below this after a merge are dropped.
inline constexpr double kDropEpsilon = 1e-15;

class TableError : public Error {
 public:
  using Error::Error;
};

inline Mask full_mask(unsigned arity) { return (Mask{1} << arity) - 1; }

class DistTable {
 public:
  struct Entry {
    Mask mask;
    double prob;
    bool operator==(const Entry&) const = default;
  };

  /// Empty table (every entry 0).
  explicit DistTable(unsigned arity);
  DistTable(unsigned arity, std::vector<Entry> entries);

  unsigned arity() const { return arity_; }
  Mask full() const { return full_mask(arity_); }

  double operator[](Mask mask) const;
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double sum() const;

  /// Dense view in mask order: (p[00..0], p[0..01], ..., p[11..1]).
  std::vector<double> dense() const;

  bool operator==(const DistTable&) const = default;

 private:
  unsigned arity_;
  std::vector<Entry> entries_;
};

std::string to_string(const DistTable& table);

/// {00..0 -> 1}: no keyword, with certainty.
DistTable unit_table(unsigned arity);
/// {mask -> 1}: a leaf that directly contains exactly `mask`.
DistTable leaf_table(unsigned arity, Mask mask);

/// Independent union of two keyword sets:
/// result[m] = sum over m = a | b of acc[a] * child[b].
DistTable merge_ordinary(const DistTable& acc, const DistTable& child);

/// Adds one alternative of a mutually exclusive choice taken with
/// probability `lambda`: result = acc + lambda * (child - unit).
DistTable merge_mux(const DistTable& acc, const DistTable& child, double lambda);

/// Folds the absence of a child (probability 1 - lambda) into its table so
/// the edge can be treated as certain.
DistTable ind_standardize(const DistTable& child, double lambda);

/// A child covering every keyword contributes nothing to its parent.
Mask contributing(Mask mask, unsigned arity);

/// Moves the full-mask entry onto the empty mask.
DistTable elca_modify(const DistTable& child);

/// merge_ordinary(acc, elca_modify(child)).
DistTable merge_elca(const DistTable& acc, const DistTable& child);

/// Drops the full-mask entry without redistributing its mass.
DistTable strip_full(const DistTable& child);

}  // namespace pxq

#endif  // PXQ_DIST_TABLE_HPP
