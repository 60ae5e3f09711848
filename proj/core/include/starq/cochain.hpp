#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "starq/jet.hpp"
#include "starq/multi_index.hpp"
#include "starq/polynomial.hpp"
#include "starq/rational.hpp"

namespace starq {

/// Polydifferential operator Σ c^{I_0…I_m} ∂_{I_0}f_0 ⋯ ∂_{I_m}f_m.
///
/// `Coeff` is the coefficient ring: JetPolynomial for the symbolic engine,
/// Polynomial once explicit potentials are substituted. Terms are keyed by
/// their slot tuple, so equal slot tuples are merged and iteration order is
/// canonical. Slots of order zero are allowed (δ produces them); a cochain is
/// normalized when none remain.
template <class Coeff>
class BasicCochain {
 public:
  using coefficient_type = Coeff;
  using container_type = std::map<SlotTuple, Coeff>;

  explicit BasicCochain(int arity = 2) : arity_(arity) {
    if (arity < 1) throw std::invalid_argument("cochain arity must be >= 1");
  }

  int arity() const { return arity_; }
  const container_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coeff coefficient(const SlotTuple& slots) const {
    auto it = terms_.find(slots);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  void add_term(const SlotTuple& slots, const Coeff& c) {
    if (static_cast<int>(slots.size()) != arity_) {
      throw std::invalid_argument("slot tuple length " + std::to_string(slots.size()) +
                                  " does not match arity " + std::to_string(arity_));
    }
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(slots, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add_scaled(const BasicCochain& other, const Rational& factor) {
    check_same_arity(other);
    if (factor == 0) return;
    for (const auto& [slots, c] : other.terms_) add_term(slots, c * factor);
  }

  BasicCochain& operator+=(const BasicCochain& other) {
    add_scaled(other, Rational(1));
    return *this;
  }
  BasicCochain& operator-=(const BasicCochain& other) {
    add_scaled(other, Rational(-1));
    return *this;
  }
  BasicCochain& operator*=(const Rational& factor) {
    if (factor == 0) {
      terms_.clear();
    } else {
      for (auto& [slots, c] : terms_) c *= factor;
    }
    return *this;
  }

  friend BasicCochain operator+(BasicCochain a, const BasicCochain& b) { return a += b; }
  friend BasicCochain operator-(BasicCochain a, const BasicCochain& b) { return a -= b; }
  friend BasicCochain operator-(BasicCochain a) { return a *= Rational(-1); }
  friend BasicCochain operator*(BasicCochain a, const Rational& f) { return a *= f; }
  friend BasicCochain operator*(const Rational& f, BasicCochain a) { return a *= f; }

  friend bool operator==(const BasicCochain& a, const BasicCochain& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  /// True when every slot carries at least one derivative.
  bool vanishes_on_constants() const {
    for (const auto& [slots, c] : terms_) {
      for (const auto& s : slots) {
        if (s.empty()) return false;
      }
    }
    return true;
  }

  /// Number of (slot tuple, coefficient monomial) pairs.
  std::size_t monomial_count() const {
    std::size_t n = 0;
    for (const auto& [slots, c] : terms_) n += c.size();
    return n;
  }

 private:
  void check_same_arity(const BasicCochain& other) const {
    if (other.arity_ != arity_) throw std::invalid_argument("cochain arity mismatch");
  }

  int arity_;
  container_type terms_;
};

using Cochain = BasicCochain<JetPolynomial>;
using ExplicitCochain = BasicCochain<Polynomial>;
using DegreeProfile = std::vector<int>;

// ---------------------------------------------------------------------------
// Elementary cochains

/// (f, g) ↦ f g
template <class Coeff>
BasicCochain<Coeff> multiplication() {
  BasicCochain<Coeff> c(2);
  c.add_term({MultiIndex{}, MultiIndex{}}, Coeff::constant(1));
  return c;
}

/// Single constant-coefficient term ∂_{I_0} ⊗ ⋯ ⊗ ∂_{I_m}.
template <class Coeff>
BasicCochain<Coeff> slot_term(const SlotTuple& slots, const Rational& factor = Rational(1)) {
  BasicCochain<Coeff> c(static_cast<int>(slots.size()));
  c.add_term(slots, Coeff::constant(factor));
  return c;
}

// ---------------------------------------------------------------------------
// Hochschild differential

/// δ applied to the single operator ∂_{I_0}⊗⋯⊗∂_{I_m} with unit coefficient:
/// f_0 M(f_1,…) − Σ_i (−1)^i M(…, f_i f_{i+1}, …) + (−1)^m M(f_0,…,f_m) f_{m+1},
/// with the Leibniz rule splitting I_i over the product f_i f_{i+1}.
inline std::vector<std::pair<SlotTuple, Rational>> delta_of_slots(const SlotTuple& slots) {
  const int m = static_cast<int>(slots.size()) - 1;
  std::map<SlotTuple, Rational> acc;
  auto add = [&acc](SlotTuple s, const Rational& v) {
    auto [it, inserted] = acc.try_emplace(std::move(s), v);
    if (!inserted) it->second += v;
  };
  {
    SlotTuple s;
    s.reserve(slots.size() + 1);
    s.push_back(MultiIndex{});
    s.insert(s.end(), slots.begin(), slots.end());
    add(std::move(s), Rational(1));
  }
  for (int i = 0; i <= m; ++i) {
    const Rational sign = -sign_power(i);
    for (const auto& split : leibniz_splits(slots[i], 2)) {
      SlotTuple s;
      s.reserve(slots.size() + 1);
      s.insert(s.end(), slots.begin(), slots.begin() + i);
      s.push_back(split.parts[0]);
      s.push_back(split.parts[1]);
      s.insert(s.end(), slots.begin() + i + 1, slots.end());
      add(std::move(s), sign * static_cast<unsigned long>(split.weight));
    }
  }
  {
    SlotTuple s = slots;
    s.push_back(MultiIndex{});
    add(std::move(s), sign_power(m));
  }
  std::vector<std::pair<SlotTuple, Rational>> out;
  for (auto& [s, v] : acc) {
    if (v != 0) out.emplace_back(s, v);
  }
  return out;
}

/// Hochschild differential of an (m+1)-cochain, computed term by term with
/// the Leibniz rule; coefficients are carried along untouched.
template <class Coeff>
BasicCochain<Coeff> hochschild_delta(const BasicCochain<Coeff>& c) {
  BasicCochain<Coeff> out(c.arity() + 1);
  for (const auto& [slots, coefficient] : c.terms()) {
    for (const auto& [s, v] : delta_of_slots(slots)) out.add_term(s, coefficient * v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gerstenhaber calculus

namespace detail {

template <class Coeff>
class DerivativeCache {
 public:
  explicit DerivativeCache(const Coeff& base) : base_(base) {}
  const Coeff& get(const MultiIndex& index) {
    auto it = cache_.find(index);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(index, derivative(base_, index)).first->second;
  }

 private:
  const Coeff& base_;
  std::unordered_map<MultiIndex, Coeff> cache_;
};

}  // namespace detail

/// The single insertion M(f_0, …, N(f_i, …, f_{i+n}), …, f_{m+n}), without the
/// Gerstenhaber sign. The derivatives of M's slot i are spread by Leibniz over
/// N's coefficient and N's arguments.
template <class Coeff>
BasicCochain<Coeff> insertion(const BasicCochain<Coeff>& m, const BasicCochain<Coeff>& n, int position) {
  if (position < 0 || position >= m.arity()) throw std::out_of_range("insertion position out of range");
  const int n_arity = n.arity();
  BasicCochain<Coeff> out(m.arity() + n_arity - 1);
  std::vector<detail::DerivativeCache<Coeff>> caches;
  caches.reserve(n.size());
  for (const auto& [slots, c] : n.terms()) caches.emplace_back(c);

  for (const auto& [m_slots, m_coeff] : m.terms()) {
    std::size_t n_index = 0;
    for (const auto& [n_slots, n_coeff] : n.terms()) {
      auto& cache = caches[n_index++];
      for (const auto& split : leibniz_splits(m_slots[position], n_arity + 1)) {
        const Coeff& dn = cache.get(split.parts[0]);
        if (dn.is_zero()) continue;
        SlotTuple s;
        s.reserve(out.arity());
        s.insert(s.end(), m_slots.begin(), m_slots.begin() + position);
        for (int l = 0; l < n_arity; ++l) s.push_back(n_slots[l] + split.parts[l + 1]);
        s.insert(s.end(), m_slots.begin() + position + 1, m_slots.end());
        Coeff product = m_coeff * dn;
        product *= Rational(static_cast<unsigned long>(split.weight));
        out.add_term(s, product);
      }
    }
  }
  return out;
}

/// (M∘N)(f_0,…,f_{m+n}) = Σ_{i=0}^{m} (−1)^{i n} M(f_0,…,N(f_i,…,f_{i+n}),…,f_{m+n})
/// with m, n the arities minus one.
template <class Coeff>
BasicCochain<Coeff> gerstenhaber_product(const BasicCochain<Coeff>& m, const BasicCochain<Coeff>& n) {
  const int n_degree = n.arity() - 1;
  BasicCochain<Coeff> out(m.arity() + n.arity() - 1);
  for (int i = 0; i < m.arity(); ++i) {
    out.add_scaled(insertion(m, n, i), sign_power(i * n_degree));
  }
  return out;
}

/// [M,N] = M∘N − (−1)^{mn} N∘M, graded by arity minus one.
template <class Coeff>
BasicCochain<Coeff> gerstenhaber_bracket(const BasicCochain<Coeff>& m, const BasicCochain<Coeff>& n) {
  const int md = m.arity() - 1;
  const int nd = n.arity() - 1;
  BasicCochain<Coeff> out = gerstenhaber_product(m, n);
  out.add_scaled(gerstenhaber_product(n, m), -sign_power(md * nd));
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry operations

/// A(t)(f,g,h) = (1/6) Σ_{σ∈S₃} sgn(σ) t(f_{σ(0)}, f_{σ(1)}, f_{σ(2)}).
template <class Coeff>
BasicCochain<Coeff> antisymmetrize(const BasicCochain<Coeff>& t) {
  if (t.arity() != 3) throw std::invalid_argument("antisymmetrize expects an arity-3 cochain");
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  static constexpr std::array<int, 6> signs = {1, 1, 1, -1, -1, -1};
  BasicCochain<Coeff> out(3);
  const Rational sixth(1, 6);
  for (const auto& [slots, c] : t.terms()) {
    for (std::size_t p = 0; p < perms.size(); ++p) {
      // Argument position q receives f_{σ(q)}, so f_{σ(q)} carries slot q.
      SlotTuple s(3);
      for (int q = 0; q < 3; ++q) s[perms[p][q]] = slots[q];
      out.add_term(s, c * Rational(sixth * signs[p]));
    }
  }
  return out;
}

/// Terms whose per-argument differential orders equal `profile` exactly.
template <class Coeff>
BasicCochain<Coeff> degree_part(const BasicCochain<Coeff>& c, const DegreeProfile& profile) {
  if (static_cast<int>(profile.size()) != c.arity()) {
    throw std::invalid_argument("degree profile length does not match arity");
  }
  BasicCochain<Coeff> out(c.arity());
  for (const auto& [slots, coefficient] : c.terms()) {
    if (degree_profile(slots) == profile) out.add_term(slots, coefficient);
  }
  return out;
}

/// (M^rev)(f,g) = M(g,f).
template <class Coeff>
BasicCochain<Coeff> reversal(const BasicCochain<Coeff>& c) {
  if (c.arity() != 2) throw std::invalid_argument("reversal expects a bilinear cochain");
  BasicCochain<Coeff> out(2);
  for (const auto& [slots, coefficient] : c.terms()) out.add_term({slots[1], slots[0]}, coefficient);
  return out;
}

template <class Coeff>
struct ParityParts {
  BasicCochain<Coeff> even;  ///< symmetric part
  BasicCochain<Coeff> odd;   ///< antisymmetric part
};

template <class Coeff>
ParityParts<Coeff> parity_split(const BasicCochain<Coeff>& c) {
  const BasicCochain<Coeff> rev = reversal(c);
  const Rational half(1, 2);
  return {(c + rev) * half, (c - rev) * half};
}

/// Symmetric part for even `level`, antisymmetric part for odd `level`.
template <class Coeff>
BasicCochain<Coeff> parity_projection(const BasicCochain<Coeff>& c, int level) {
  auto parts = parity_split(c);
  return level % 2 == 0 ? parts.even : parts.odd;
}

/// Value on (x¹, x², x³) of a cochain of degree (1,1,1).
template <class Coeff>
Coeff coordinate_witness(const BasicCochain<Coeff>& c) {
  if (c.arity() != 3) throw std::invalid_argument("coordinate witness expects an arity-3 cochain");
  for (const auto& [slots, coefficient] : c.terms()) {
    if (degree_profile(slots) != DegreeProfile{1, 1, 1}) {
      throw std::invalid_argument("coordinate witness expects a (1,1,1) cochain");
    }
  }
  return c.coefficient({MultiIndex::axis(1), MultiIndex::axis(2), MultiIndex::axis(3)});
}

/// Largest total differential order over all terms (-1 for the zero cochain).
template <class Coeff>
int max_total_order(const BasicCochain<Coeff>& c) {
  int m = -1;
  for (const auto& [slots, coefficient] : c.terms()) m = std::max(m, total_order(slots));
  return m;
}

template <class Coeff>
int min_total_order(const BasicCochain<Coeff>& c) {
  int m = -1;
  for (const auto& [slots, coefficient] : c.terms()) {
    const int t = total_order(slots);
    m = (m < 0) ? t : std::min(m, t);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Substitutes explicit potentials into every coefficient.
ExplicitCochain specialize(const Cochain& c, const JetContext& context);

/// Σ coefficient × ∏ ∂_{I_j}(args[j]), exactly.
Polynomial eval(const ExplicitCochain& c, std::span<const Polynomial> args);
Polynomial eval(const Cochain& c, const JetContext& context, std::span<const Polynomial> args);

}  // namespace starq
