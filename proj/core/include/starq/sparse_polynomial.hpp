#pragma once

#include <map>
#include <utility>

#include "starq/rational.hpp"

namespace starq {

/// Sparse polynomial with exact rational coefficients over a monomial key.
/// `Key` must be totally ordered and provide `Key * Key` (monomial product);
/// the default-constructed key is the unit monomial. Zero coefficients are
/// never stored, so equality is structural.
template <class Key>
class SparsePolynomial {
 public:
  using key_type = Key;
  using container_type = std::map<Key, Rational>;

  SparsePolynomial() = default;

  static SparsePolynomial constant(const Rational& c) { return monomial(Key{}, c); }
  static SparsePolynomial monomial(const Key& key, const Rational& c = Rational(1)) {
    SparsePolynomial p;
    p.add_term(key, c);
    return p;
  }

  const container_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of the unit monomial.
  Rational constant_term() const {
    auto it = terms_.find(Key{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Key& key, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// this += c * other
  void add_scaled(const SparsePolynomial& other, const Rational& c) {
    if (c == 0) return;
    for (const auto& [key, value] : other.terms_) add_term(key, value * c);
  }

  SparsePolynomial& operator+=(const SparsePolynomial& other) {
    for (const auto& [key, value] : other.terms_) add_term(key, value);
    return *this;
  }
  SparsePolynomial& operator-=(const SparsePolynomial& other) {
    for (const auto& [key, value] : other.terms_) add_term(key, -value);
    return *this;
  }
  SparsePolynomial& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& [key, value] : terms_) value *= c;
    }
    return *this;
  }

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator-(SparsePolynomial a) { return a *= Rational(-1); }
  friend SparsePolynomial operator*(SparsePolynomial a, const Rational& c) { return a *= c; }
  friend SparsePolynomial operator*(const Rational& c, SparsePolynomial a) { return a *= c; }

  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
    SparsePolynomial out;
    for (const auto& [ka, va] : a.terms_) {
      for (const auto& [kb, vb] : b.terms_) out.add_term(ka * kb, va * vb);
    }
    return out;
  }
  SparsePolynomial& operator*=(const SparsePolynomial& other) { return *this = *this * other; }

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator<(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.terms_ < b.terms_;
  }

 private:
  container_type terms_;
};

}  // namespace starq
