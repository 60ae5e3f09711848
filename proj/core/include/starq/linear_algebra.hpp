#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "starq/rational.hpp"

namespace starq {

/// Sorted (key, value) pairs without zero values.
template <class Key>
using SparseVector = std::vector<std::pair<Key, Rational>>;

template <class Key>
SparseVector<Key> to_sparse(const std::map<Key, Rational>& m) {
  SparseVector<Key> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) {
    if (v != 0) out.emplace_back(k, v);
  }
  return out;
}

/// y += a·x
template <class Key>
void axpy(SparseVector<Key>& y, const Rational& a, const SparseVector<Key>& x) {
  if (a == 0 || x.empty()) return;
  SparseVector<Key> out;
  out.reserve(y.size() + x.size());
  auto yi = y.begin();
  auto xi = x.begin();
  while (yi != y.end() || xi != x.end()) {
    if (xi == x.end() || (yi != y.end() && yi->first < xi->first)) {
      out.push_back(std::move(*yi++));
    } else if (yi == y.end() || xi->first < yi->first) {
      out.emplace_back(xi->first, a * xi->second);
      ++xi;
    } else {
      Rational v = yi->second + a * xi->second;
      if (v != 0) out.emplace_back(std::move(yi->first), std::move(v));
      ++yi;
      ++xi;
    }
  }
  y = std::move(out);
}

/// Exact column echelon form over the rationals.
///
/// Columns are added in a fixed order; a column is kept as a pivot column when
/// it is independent of all earlier ones. `solve` expresses a target in terms
/// of the pivot columns only, which is the reduced-row-echelon solution with
/// every free variable set to zero.
template <class Key>
class SparseEchelon {
 public:
  /// Returns true when the column is independent of the earlier ones.
  bool add_column(SparseVector<Key> v) {
    const std::size_t index = independent_.size();
    SparseVector<std::size_t> combo{{index, Rational(1)}};
    reduce(v, &combo);
    const bool independent = !v.empty();
    independent_.push_back(independent);
    if (independent) {
      pivots_.emplace(v.front().first, basis_.size());
      basis_.push_back({std::move(v), std::move(combo)});
    }
    return independent;
  }

  std::size_t columns() const { return independent_.size(); }
  std::size_t rank() const { return basis_.size(); }
  bool is_pivot_column(std::size_t column) const { return independent_.at(column); }

  /// Coefficients x with Σ x_j column_j = target, or nullopt when the target
  /// lies outside the column span.
  std::optional<SparseVector<std::size_t>> solve(SparseVector<Key> target) const {
    SparseVector<std::size_t> x;
    while (!target.empty()) {
      auto it = pivots_.find(target.front().first);
      if (it == pivots_.end()) return std::nullopt;
      const Row& row = basis_[it->second];
      const Rational factor = target.front().second / row.vec.front().second;
      axpy(target, Rational(-factor), row.vec);
      axpy(x, factor, row.combo);
    }
    return x;
  }

  bool in_span(SparseVector<Key> target) const { return solve(std::move(target)).has_value(); }

 private:
  struct Row {
    SparseVector<Key> vec;
    SparseVector<std::size_t> combo;
  };

  void reduce(SparseVector<Key>& v, SparseVector<std::size_t>* combo) const {
    while (!v.empty()) {
      auto it = pivots_.find(v.front().first);
      if (it == pivots_.end()) return;
      const Row& row = basis_[it->second];
      const Rational factor = v.front().second / row.vec.front().second;
      axpy(v, Rational(-factor), row.vec);
      if (combo) axpy(*combo, Rational(-factor), row.combo);
    }
  }

  std::vector<Row> basis_;
  std::map<Key, std::size_t> pivots_;
  std::vector<bool> independent_;
};

}  // namespace starq
