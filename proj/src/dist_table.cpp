#include "pxq/dist_table.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pxq {

namespace {

void check_arity(unsigned arity) {
  if (arity < 1 || arity > kMaxArity) {
    throw TableError("keyword arity " + std::to_string(arity) + " outside [1, " +
                     std::to_string(kMaxArity) + "]");
  }
}

void check_same_arity(const DistTable& a, const DistTable& b) {
  if (a.arity() != b.arity()) throw TableError("keyword arity mismatch");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw TableError("edge probability outside (0,1]");
}

// Sorts by mask (stable, so sums are accumulated in a fixed order), folds
// duplicates and drops negligible entries.
std::vector<DistTable::Entry> normalize(std::vector<DistTable::Entry> raw) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const auto& a, const auto& b) { return a.mask < b.mask; });
  std::vector<DistTable::Entry> out;
  out.reserve(raw.size());
  for (const auto& e : raw) {
    if (!out.empty() && out.back().mask == e.mask) {
      out.back().prob += e.prob;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const auto& e) { return std::abs(e.prob) < kDropEpsilon; });
  return out;
}

}  // namespace

DistTable::DistTable(unsigned arity) : arity_(arity) { check_arity(arity); }

DistTable::DistTable(unsigned arity, std::vector<Entry> entries) : arity_(arity) {
  check_arity(arity);
  for (const Entry& e : entries) {
    if (e.mask > full_mask(arity)) throw TableError("mask outside keyword arity");
  }
  entries_ = normalize(std::move(entries));
}

double DistTable::operator[](Mask mask) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), mask,
                             [](const Entry& e, Mask m) { return e.mask < m; });
  return (it != entries_.end() && it->mask == mask) ? it->prob : 0.0;
}

double DistTable::sum() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += e.prob;
  return s;
}

std::vector<double> DistTable::dense() const {
  std::vector<double> out(std::size_t{1} << arity_, 0.0);
  for (const Entry& e : entries_) out[e.mask] = e.prob;
  return out;
}

std::string to_string(const DistTable& table) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& e : table.entries()) {
    if (!first) os << ", ";
    first = false;
    for (unsigned b = table.arity(); b-- > 0;) os << ((e.mask >> b) & 1u);
    os << ':' << e.prob;
  }
  os << '}';
  return os.str();
}

DistTable unit_table(unsigned arity) { return DistTable(arity, {{0, 1.0}}); }

DistTable leaf_table(unsigned arity, Mask mask) { return DistTable(arity, {{mask, 1.0}}); }

DistTable merge_ordinary(const DistTable& acc, const DistTable& child) {
  check_same_arity(acc, child);
  std::vector<DistTable::Entry> raw;
  raw.reserve(acc.size() * child.size());
  for (const auto& a : acc.entries()) {
    for (const auto& c : child.entries()) {
      raw.push_back({a.mask | c.mask, a.prob * c.prob});
    }
  }
  return DistTable(acc.arity(), std::move(raw));
}

DistTable merge_mux(const DistTable& acc, const DistTable& child, double lambda) {
  check_same_arity(acc, child);
  check_lambda(lambda);
  std::vector<DistTable::Entry> raw(acc.entries().begin(), acc.entries().end());
  for (const auto& c : child.entries()) raw.push_back({c.mask, lambda * c.prob});
  raw.push_back({0, -lambda});
  return DistTable(acc.arity(), std::move(raw));
}

DistTable ind_standardize(const DistTable& child, double lambda) {
  check_lambda(lambda);
  if (lambda == 1.0) return child;
  std::vector<DistTable::Entry> raw;
  raw.reserve(child.size() + 1);
  for (const auto& c : child.entries()) raw.push_back({c.mask, lambda * c.prob});
  raw.push_back({0, 1.0 - lambda});
  return DistTable(child.arity(), std::move(raw));
}

Mask contributing(Mask mask, unsigned arity) { return mask == full_mask(arity) ? 0 : mask; }

DistTable elca_modify(const DistTable& child) {
  std::vector<DistTable::Entry> raw;
  raw.reserve(child.size());
  for (const auto& c : child.entries()) {
    raw.push_back({contributing(c.mask, child.arity()), c.prob});
  }
  return DistTable(child.arity(), std::move(raw));
}

DistTable merge_elca(const DistTable& acc, const DistTable& child) {
  return merge_ordinary(acc, elca_modify(child));
}

DistTable strip_full(const DistTable& child) {
  std::vector<DistTable::Entry> raw;
  raw.reserve(child.size());
  for (const auto& c : child.entries()) {
    if (c.mask != child.full()) raw.push_back(c);
  }
  return DistTable(child.arity(), std::move(raw));
}

}  // namespace pxq
