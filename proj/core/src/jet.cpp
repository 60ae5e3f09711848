#include "starq/jet.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "starq/error.hpp"

namespace starq {

std::string_view to_string(PoissonMode mode) {
  return mode == PoissonMode::NablaPhi ? "nabla-phi" : "psi-nabla-phi";
}

PoissonMode parse_mode(std::string_view text) {
  if (text == "nabla-phi") return PoissonMode::NablaPhi;
  if (text == "psi-nabla-phi") return PoissonMode::PsiNablaPhi;
  throw ParseError("unknown mode '" + std::string(text) + "' (expected nabla-phi or psi-nabla-phi)");
}

JetVariable JetVariable::phi(const MultiIndex& index) {
  if (index.empty()) throw std::invalid_argument("phi-jets need at least one derivative");
  return JetVariable(Potential::Phi, index);
}

JetVariable JetVariable::psi(const MultiIndex& index) { return JetVariable(Potential::Psi, index); }

JetVariable JetVariable::differentiated(int axis) const {
  return JetVariable(potential_, index_.with(axis));
}

std::string JetVariable::name() const {
  return std::string(potential_ == Potential::Phi ? "phi_" : "psi_") + index_.digits();
}

JetVariable JetVariable::parse(std::string_view name) {
  try {
    if (name.starts_with("phi_")) return phi(MultiIndex::from_digits(name.substr(4)));
    if (name.starts_with("psi_")) return psi(MultiIndex::from_digits(name.substr(4)));
  } catch (const std::exception& e) {
    throw ParseError("invalid jet variable '" + std::string(name) + "': " + e.what());
  }
  throw ParseError("invalid jet variable '" + std::string(name) + "'");
}

std::strong_ordering JetVariable::operator<=>(const JetVariable& other) const {
  if (auto c = potential_ <=> other.potential_; c != 0) return c;
  if (auto c = index_.order() <=> other.index_.order(); c != 0) return c;
  return index_ <=> other.index_;
}

JetMonomial::JetMonomial(std::vector<JetVariable> factors) : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end());
}

JetMonomial JetMonomial::operator*(const JetMonomial& other) const {
  JetMonomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  std::merge(factors_.begin(), factors_.end(), other.factors_.begin(), other.factors_.end(),
             std::back_inserter(out.factors_));
  return out;
}

int JetMonomial::count(Potential p) const {
  return static_cast<int>(std::count_if(factors_.begin(), factors_.end(),
                                        [p](const JetVariable& v) { return v.potential() == p; }));
}

int JetMonomial::index_weight() const {
  int w = 0;
  for (const auto& v : factors_) w += v.index().order();
  return w;
}

int JetMonomial::max_order() const {
  int m = 0;
  for (const auto& v : factors_) m = std::max(m, v.index().order());
  return m;
}

JetPolynomial jet(const JetVariable& v, const Rational& coefficient) {
  return JetPolynomial::monomial(JetMonomial({v}), coefficient);
}

JetPolynomial canonicalize(const std::vector<RawJetTerm>& raw) {
  JetPolynomial out;
  for (const auto& term : raw) out.add_term(JetMonomial(term.factors), term.coefficient);
  return out;
}

JetPolynomial derivative(const JetPolynomial& p, int axis) {
  if (axis < 1 || axis > kDimension) throw std::out_of_range("derivative axis outside {1,2,3}");
  JetPolynomial out;
  for (const auto& [mono, value] : p.terms()) {
    const auto& f = mono.factors();
    // Product rule; equal neighbouring factors give the same result, so each
    // distinct factor is differentiated once and weighted by its multiplicity.
    for (std::size_t i = 0; i < f.size();) {
      std::size_t run = i + 1;
      while (run < f.size() && f[run] == f[i]) ++run;
      std::vector<JetVariable> next = f;
      next[i] = f[i].differentiated(axis);
      out.add_term(JetMonomial(std::move(next)), value * static_cast<long>(run - i));
      i = run;
    }
  }
  return out;
}

JetPolynomial derivative(const JetPolynomial& p, const MultiIndex& index) {
  JetPolynomial out = p;
  for (int axis = 1; axis <= kDimension; ++axis) {
    for (int n = 0; n < index.count(axis) && !out.is_zero(); ++n) out = derivative(out, axis);
  }
  return out;
}

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // Even permutations of (1,2,3) are the cyclic ones.
  if ((i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1)) return 1;
  return -1;
}

JetPolynomial substitute_P(const PJet& symbol, PoissonMode mode) {
  const int i = symbol.upper_first;
  const int j = symbol.upper_second;
  if (i < 1 || i > kDimension || j < 1 || j > kDimension) {
    throw std::out_of_range("P-jet upper index outside {1,2,3}");
  }
  JetPolynomial out;
  if (i == j) return out;
  const int k = 6 - i - j;
  const Rational sign(levi_civita(i, j, k));
  if (mode == PoissonMode::NablaPhi) {
    out.add_term(JetMonomial({JetVariable::phi(symbol.lower.with(k))}), sign);
    return out;
  }
  for (const auto& split : leibniz_splits(symbol.lower, 2)) {
    out.add_term(JetMonomial({JetVariable::psi(split.parts[0]), JetVariable::phi(split.parts[1].with(k))}),
                 sign * static_cast<unsigned long>(split.weight));
  }
  return out;
}

JetPolynomial substitute_P(const std::vector<PJetTerm>& expr, PoissonMode mode) {
  JetPolynomial out;
  for (const auto& term : expr) {
    JetPolynomial product = JetPolynomial::constant(term.coefficient);
    for (const auto& factor : term.factors) {
      if (product.is_zero()) break;
      product = product * substitute_P(factor, mode);
    }
    out += product;
  }
  return out;
}

Polynomial eval_jets(const JetPolynomial& p, const JetContext& context) {
  std::map<JetVariable, Polynomial> cache;
  auto value_of = [&](const JetVariable& v) -> const Polynomial& {
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    Polynomial value;
    if (v.potential() == Potential::Phi) {
      value = derivative(context.phi, v.index());
    } else {
      if (!context.psi) throw std::invalid_argument("psi-jet " + v.name() + " present but no psi given");
      value = derivative(*context.psi, v.index());
    }
    return cache.emplace(v, std::move(value)).first->second;
  };
  Polynomial out;
  for (const auto& [mono, coefficient] : p.terms()) {
    Polynomial term = Polynomial::constant(coefficient);
    for (const auto& v : mono.factors()) {
      term = term * value_of(v);
      if (term.is_zero()) break;
    }
    out += term;
  }
  return out;
}

std::string to_string(const JetPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, value] : p.terms()) {
    const Rational magnitude = abs(value);
    if (first) {
      if (value < 0) out += "-";
    } else {
      out += value < 0 ? " - " : " + ";
    }
    first = false;
    std::string factors;
    for (const auto& v : mono.factors()) {
      if (!factors.empty()) factors += "*";
      factors += v.name();
    }
    if (factors.empty()) {
      out += magnitude.get_str();
    } else if (magnitude == 1) {
      out += factors;
    } else {
      out += magnitude.get_str() + "*" + factors;
    }
  }
  return out;
}

}  // namespace starq
