#include "starq/multi_index.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>

namespace starq {

namespace {

void check_index(int index) {
  if (index < 1 || index > kDimension) {
    throw std::out_of_range("coordinate index " + std::to_string(index) + " outside {1,2,3}");
  }
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> indices)
    : MultiIndex(from_indices(std::span<const int>(indices.begin(), indices.size()))) {}

MultiIndex MultiIndex::from_indices(std::span<const int> indices) {
  MultiIndex m;
  for (int i : indices) {
    check_index(i);
    ++m.counts_[i - 1];
  }
  return m;
}

MultiIndex MultiIndex::from_counts(int c1, int c2, int c3) {
  if (c1 < 0 || c2 < 0 || c3 < 0 || c1 > 255 || c2 > 255 || c3 > 255) {
    throw std::out_of_range("multi-index counts out of range");
  }
  MultiIndex m;
  m.counts_ = {static_cast<std::uint8_t>(c1), static_cast<std::uint8_t>(c2),
               static_cast<std::uint8_t>(c3)};
  return m;
}

MultiIndex MultiIndex::axis(int index) {
  check_index(index);
  MultiIndex m;
  m.counts_[index - 1] = 1;
  return m;
}

MultiIndex MultiIndex::from_digits(std::string_view digits) {
  MultiIndex m;
  for (char c : digits) {
    const int i = c - '0';
    check_index(i);
    ++m.counts_[i - 1];
  }
  return m;
}

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  out.reserve(order());
  for (int axis = 0; axis < kDimension; ++axis) {
    out.insert(out.end(), counts_[axis], axis + 1);
  }
  return out;
}

std::string MultiIndex::digits() const {
  std::string out;
  for (int axis = 0; axis < kDimension; ++axis) {
    out.append(counts_[axis], static_cast<char>('1' + axis));
  }
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  return from_counts(counts_[0] + other.counts_[0], counts_[1] + other.counts_[1],
                     counts_[2] + other.counts_[2]);
}

MultiIndex MultiIndex::with(int index) const { return *this + axis(index); }

bool MultiIndex::contains(const MultiIndex& other) const {
  return counts_[0] >= other.counts_[0] && counts_[1] >= other.counts_[1] &&
         counts_[2] >= other.counts_[2];
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!contains(other)) throw std::invalid_argument("multi-index difference would be negative");
  return from_counts(counts_[0] - other.counts_[0], counts_[1] - other.counts_[1],
                     counts_[2] - other.counts_[2]);
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  // Sequences are 1^a 2^b 3^c. At the first axis where the counts differ, the
  // side with fewer occurrences is either exhausted (a prefix, hence smaller)
  // or continues with a larger digit (hence larger).
  for (int axis = 0; axis < kDimension; ++axis) {
    const int a = counts_[axis];
    const int b = other.counts_[axis];
    if (a == b) continue;
    const MultiIndex& fewer = a < b ? *this : other;
    int rest = 0;
    for (int later = axis + 1; later < kDimension; ++later) rest += fewer.counts_[later];
    const bool fewer_is_smaller = (rest == 0);
    const bool this_is_fewer = a < b;
    return (fewer_is_smaller == this_is_fewer) ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

int total_order(const SlotTuple& slots) {
  int total = 0;
  for (const auto& s : slots) total += s.order();
  return total;
}

MultiIndex total_index(const SlotTuple& slots) {
  MultiIndex total;
  for (const auto& s : slots) total = total + s;
  return total;
}

std::vector<int> degree_profile(const SlotTuple& slots) {
  std::vector<int> out;
  out.reserve(slots.size());
  for (const auto& s : slots) out.push_back(s.order());
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

namespace {

// Compositions of `n` into `parts` non-negative parts, with multinomial weight.
void compositions(int n, int parts, std::vector<int>& current,
                  std::vector<std::pair<std::vector<int>, std::uint64_t>>& out) {
  if (static_cast<int>(current.size()) == parts - 1) {
    current.push_back(n);
    std::uint64_t w = 1;
    int remaining = 0;
    for (int c : current) remaining += c;
    for (int c : current) {
      w *= binomial(remaining, c);
      remaining -= c;
    }
    out.emplace_back(current, w);
    current.pop_back();
    return;
  }
  for (int c = 0; c <= n; ++c) {
    current.push_back(c);
    compositions(n - c, parts, current, out);
    current.pop_back();
  }
}

std::vector<IndexSplit> compute_splits(const MultiIndex& index, int targets) {
  std::array<std::vector<std::pair<std::vector<int>, std::uint64_t>>, kDimension> per_axis;
  for (int axis = 0; axis < kDimension; ++axis) {
    std::vector<int> current;
    compositions(index.count(axis + 1), targets, current, per_axis[axis]);
  }
  std::vector<IndexSplit> out;
  out.reserve(per_axis[0].size() * per_axis[1].size() * per_axis[2].size());
  for (const auto& [c1, w1] : per_axis[0]) {
    for (const auto& [c2, w2] : per_axis[1]) {
      for (const auto& [c3, w3] : per_axis[2]) {
        IndexSplit split{{}, w1 * w2 * w3};
        split.parts.reserve(targets);
        for (int t = 0; t < targets; ++t) split.parts.push_back(MultiIndex::from_counts(c1[t], c2[t], c3[t]));
        out.push_back(std::move(split));
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<IndexSplit>& leibniz_splits(const MultiIndex& index, int targets) {
  if (targets < 1) throw std::invalid_argument("leibniz_splits needs at least one target");
  static std::shared_mutex mutex;
  static std::map<std::pair<MultiIndex, int>, std::vector<IndexSplit>> cache;
  const auto key = std::make_pair(index, targets);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto splits = compute_splits(index, targets);
  std::unique_lock lock(mutex);
  return cache.try_emplace(key, std::move(splits)).first->second;
}

}  // namespace starq
