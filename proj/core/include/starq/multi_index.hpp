#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace starq {

inline constexpr int kDimension = 3;

/// Sorted multi-index over {1,2,3}; stores how often each coordinate occurs,
/// so ∂_{12} and ∂_{21} are the same value by construction.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> indices);

  /// Indices are 1-based; throws std::out_of_range outside {1,2,3}.
  static MultiIndex from_indices(std::span<const int> indices);
  static MultiIndex from_counts(int c1, int c2, int c3);
  static MultiIndex axis(int index);
  /// Parses a digit string such as "112" (order irrelevant, "" is the identity).
  static MultiIndex from_digits(std::string_view digits);

  int count(int index) const { return counts_[index - 1]; }
  int order() const { return counts_[0] + counts_[1] + counts_[2]; }
  bool empty() const { return order() == 0; }

  std::vector<int> indices() const;
  std::string digits() const;

  MultiIndex operator+(const MultiIndex& other) const;
  MultiIndex with(int index) const;
  bool contains(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;

  bool operator==(const MultiIndex&) const = default;
  /// Lexicographic order of the sorted index sequences ("" < "1" < "11" < "12" < "2").
  std::strong_ordering operator<=>(const MultiIndex& other) const;

  std::size_t hash() const {
    return counts_[0] | (static_cast<std::size_t>(counts_[1]) << 8) |
           (static_cast<std::size_t>(counts_[2]) << 16);
  }

 private:
  std::array<std::uint8_t, 3> counts_{};
};

/// One multi-index per argument of a polydifferential operator.
using SlotTuple = std::vector<MultiIndex>;

int total_order(const SlotTuple& slots);
/// Sum of all slot multi-indices (the per-coordinate derivative count).
MultiIndex total_index(const SlotTuple& slots);
std::vector<int> degree_profile(const SlotTuple& slots);

/// A distribution of one multi-index over several targets together with its
/// Leibniz weight ∏_axis multinomial(count; parts).
struct IndexSplit {
  std::vector<MultiIndex> parts;
  std::uint64_t weight;
};

/// All ways to distribute `index` over `targets` ordered parts, as produced by
/// the Leibniz rule ∂_I(f_1⋯f_n) = Σ w ∂_{J_1}f_1⋯∂_{J_n}f_n. Results are cached.
const std::vector<IndexSplit>& leibniz_splits(const MultiIndex& index, int targets);

std::uint64_t binomial(int n, int k);

}  // namespace starq

template <>
struct std::hash<starq::MultiIndex> {
  std::size_t operator()(const starq::MultiIndex& m) const noexcept { return m.hash(); }
};
