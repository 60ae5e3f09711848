#include "starq/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include "starq/error.hpp"
#include "starq/expression.hpp"
#include "starq/parallel.hpp"

namespace starq {

Polynomial PoissonVector::entry(int i, int j) const {
  for (int k = 1; k <= kDimension; ++k) {
    const int e = levi_civita(i, j, k);
    if (e != 0) return components[k - 1] * Rational(e);
  }
  return {};
}

PoissonVector gradient_vector(const Polynomial& phi) {
  return {{derivative(phi, 1), derivative(phi, 2), derivative(phi, 3)}};
}

PoissonVector poisson_vector(const JetContext& context) {
  PoissonVector p = gradient_vector(context.phi);
  if (context.psi) {
    for (auto& c : p.components) c = *context.psi * c;
  }
  return p;
}

PoissonVector parse_poisson_vector(std::string_view text) {
  PoissonVector p;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 2) == (comma == std::string_view::npos)) {
      throw ParseError("a Poisson vector needs exactly three comma-separated components");
    }
    const std::size_t end = i < 2 ? comma : text.size();
    p.components[i] = parse_polynomial(text.substr(start, end - start));
    start = end + 1;
  }
  return p;
}

Polynomial jacobi_residual(const PoissonVector& p) {
  const auto& v = p.components;
  const Polynomial curl[3] = {
      derivative(v[2], 2) - derivative(v[1], 3),
      derivative(v[0], 3) - derivative(v[2], 1),
      derivative(v[1], 1) - derivative(v[0], 2),
  };
  return v[0] * curl[0] + v[1] * curl[1] + v[2] * curl[2];
}

std::vector<JetPolynomial> jacobi_residual_jets(PoissonMode mode, int max_jet_order) {
  if (max_jet_order < 2) throw std::invalid_argument("the residual already contains second-order jets");
  const JetPolynomial v[3] = {
      substitute_P(PJet{2, 3, {}}, mode),
      substitute_P(PJet{3, 1, {}}, mode),
      substitute_P(PJet{1, 2, {}}, mode),
  };
  const JetPolynomial curl[3] = {
      derivative(v[2], 2) - derivative(v[1], 3),
      derivative(v[0], 3) - derivative(v[2], 1),
      derivative(v[1], 1) - derivative(v[0], 2),
  };
  const JetPolynomial residual = v[0] * curl[0] + v[1] * curl[1] + v[2] * curl[2];
  std::vector<JetPolynomial> out{residual};
  const int extra = max_jet_order - 2;
  for (int a = 0; a <= extra; ++a) {
    for (int b = 0; a + b <= extra; ++b) {
      for (int c = 0; a + b + c <= extra; ++c) {
        if (a + b + c == 0) continue;
        out.push_back(derivative(residual, MultiIndex::from_counts(a, b, c)));
      }
    }
  }
  return out;
}

ExplicitCochain moyal_level(const ConstantBivector& p, int k) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (p[i][j] != -p[j][i]) throw std::invalid_argument("the bivector must be antisymmetric");
    }
  }
  if (k < 0) throw std::invalid_argument("levels start at 0");
  ExplicitCochain out(2);
  Rational scale(1);
  for (int m = 1; m <= k; ++m) scale /= 2 * m;
  // Odometer over the k index pairs (i_m, j_m).
  std::vector<int> pairs(k, 0);
  for (;;) {
    Rational c = scale;
    std::vector<int> left;
    std::vector<int> right;
    for (int m = 0; m < k; ++m) {
      const int i = pairs[m] / 3;
      const int j = pairs[m] % 3;
      c *= p[i][j];
      left.push_back(i + 1);
      right.push_back(j + 1);
    }
    if (c != 0) {
      out.add_term({MultiIndex::from_indices(left), MultiIndex::from_indices(right)}, Polynomial::constant(c));
    }
    int m = 0;
    while (m < k && pairs[m] == 8) pairs[m++] = 0;
    if (m == k) break;
    ++pairs[m];
  }
  return out;
}

ExplicitCochain moyal_level(const PoissonVector& p, int k) {
  ConstantBivector matrix;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const Polynomial e = p.entry(i, j);
      if (degree(e) > 0) throw std::invalid_argument("the Moyal formula needs a constant Poisson tensor");
      matrix[i - 1][j - 1] = e.constant_term();
    }
  }
  return moyal_level(matrix, k);
}

ExplicitStarProduct moyal_star(const PoissonVector& p, int order) {
  ExplicitStarProduct star;
  star.order = order;
  for (int k = 0; k <= order; ++k) star.levels.push_back(moyal_level(p, k));
  return star;
}

namespace {

int resolve_order(const ExplicitStarProduct& star, int order) {
  const int available = static_cast<int>(star.levels.size()) - 1;
  if (order < 0) return available;
  if (order > available) {
    throw std::invalid_argument("requested order " + std::to_string(order) + " exceeds the star order " +
                                std::to_string(available));
  }
  return order;
}

Polynomial apply_level(const ExplicitStarProduct& star, int k, const Polynomial& f, const Polynomial& g) {
  if (k == 0) return f * g;
  const Polynomial args[2] = {f, g};
  return eval(star.levels[k], args);
}

}  // namespace

std::vector<Polynomial> star_series(const ExplicitStarProduct& star, const Polynomial& f, const Polynomial& g,
                                    int order) {
  order = resolve_order(star, order);
  std::vector<Polynomial> out;
  out.reserve(order + 1);
  for (int k = 0; k <= order; ++k) out.push_back(apply_level(star, k, f, g));
  return out;
}

std::vector<Polynomial> associator(const ExplicitStarProduct& star, const Polynomial& f, const Polynomial& g,
                                   const Polynomial& h, int order) {
  order = resolve_order(star, order);
  const auto fg = star_series(star, f, g, order);
  const auto gh = star_series(star, g, h, order);
  std::vector<Polynomial> out(order + 1);
  for (int j = 0; j <= order; ++j) {
    for (int a = 0; a <= j; ++a) {
      out[j] += apply_level(star, j - a, fg[a], h);
      out[j] -= apply_level(star, j - a, f, gh[a]);
    }
  }
  return out;
}

std::vector<Polynomial> commutator_probe(const ExplicitStarProduct& star, const Polynomial& f,
                                         const Polynomial& g, int order) {
  order = resolve_order(star, order);
  auto out = star_series(star, f, g, order);
  const auto back = star_series(star, g, f, order);
  for (int k = 0; k <= order; ++k) out[k] -= back[k];
  return out;
}

std::string AssociatorWitness::describe() const {
  auto name = [](const Exponents& e) { return to_string(Polynomial::monomial(e)); };
  return "f=" + name(f) + ", g=" + name(g) + ", h=" + name(h) + " at nu^" + std::to_string(order) + ": " +
         to_string(residual);
}

namespace {

std::vector<std::array<Exponents, 3>> monomial_triples(int max_degree) {
  const auto monomials = monomials_up_to(max_degree);
  std::vector<std::array<Exponents, 3>> out;
  for (const auto& a : monomials) {
    for (const auto& b : monomials) {
      if (a.degree() + b.degree() > max_degree) continue;
      for (const auto& c : monomials) {
        if (a.degree() + b.degree() + c.degree() <= max_degree) out.push_back({a, b, c});
      }
    }
  }
  // Small triples first, so a witness is as small as possible and found early.
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x[0].degree() + x[1].degree() + x[2].degree() < y[0].degree() + y[1].degree() + y[2].degree();
  });
  return out;
}

}  // namespace

std::size_t monomial_triple_count(int max_degree) { return monomial_triples(max_degree).size(); }

std::optional<AssociatorWitness> find_associator_failure(const ExplicitStarProduct& star, int max_degree,
                                                         int order) {
  order = resolve_order(star, order);
  const auto triples = monomial_triples(max_degree);
  std::vector<std::optional<AssociatorWitness>> failures(triples.size());
  // Smallest failing index so far. Indices below it are always evaluated, so
  // the reported witness does not depend on scheduling.
  std::atomic<std::size_t> first(triples.size());
  parallel_for(triples.size(), [&](std::size_t t) {
    if (t > first.load(std::memory_order_relaxed)) return;
    const auto& [a, b, c] = triples[t];
    const auto residual = associator(star, Polynomial::monomial(a), Polynomial::monomial(b),
                                     Polynomial::monomial(c), order);
    for (int j = 0; j <= order; ++j) {
      if (!residual[j].is_zero()) {
        failures[t] = AssociatorWitness{a, b, c, j, residual[j]};
        std::size_t current = first.load();
        while (t < current && !first.compare_exchange_weak(current, t)) {
        }
        return;
      }
    }
  });
  if (first.load() < triples.size()) return failures[first.load()];
  return std::nullopt;
}

std::optional<int> parity_failure(const ExplicitStarProduct& star) {
  for (int k = 0; k < static_cast<int>(star.levels.size()); ++k) {
    if (!(reversal(star.levels[k]) == star.levels[k] * sign_power(k))) return k;
  }
  return std::nullopt;
}

bool VerificationReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

VerificationReport verify_star(const ExplicitStarProduct& star, const VerifyOptions& options) {
  if (options.degree < 1) throw std::invalid_argument("the degree bound must be >= 1");
  const int order = resolve_order(star, options.order);
  VerificationReport report;
  const std::string digest = options.digest.empty() ? std::string("in-memory") : options.digest;

  {
    CheckResult c;
    c.name = "associator";
    c.inputs = digest + "; deg<=" + std::to_string(options.degree) + ", nu^0..nu^" + std::to_string(order) + ", " +
               std::to_string(monomial_triple_count(options.degree)) + " triples";
    report.witness = find_associator_failure(star, options.degree, order);
    c.pass = !report.witness;
    c.residual = c.pass ? "0" : report.witness->describe();
    report.checks.push_back(std::move(c));
  }
  {
    CheckResult c;
    c.name = "parity";
    c.inputs = digest + "; M_0..M_" + std::to_string(star.levels.size() - 1);
    const auto failing = parity_failure(star);
    c.pass = !failing;
    c.residual = c.pass ? "0" : "M_" + std::to_string(*failing) + "(g,f) != (-1)^k M_k(f,g)";
    report.checks.push_back(std::move(c));
  }

  std::string even_residual;
  std::string diagonal_residual;
  std::string first_residual;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const auto comm = commutator_probe(star, coordinate(i), coordinate(j), order);
      const std::string pair = "[x" + std::to_string(i) + ",x" + std::to_string(j) + "]";
      for (int k = 0; k <= order; ++k) {
        if (comm[k].is_zero()) continue;
        if (i == j && diagonal_residual.empty()) diagonal_residual = pair + " = " + to_string(comm[k]);
        if (k % 2 == 0 && even_residual.empty()) {
          even_residual = pair + " at nu^" + std::to_string(k) + ": " + to_string(comm[k]);
        }
      }
      if (options.poisson && order >= 1 && first_residual.empty()) {
        const Polynomial expected = options.poisson->entry(i, j);
        if (!(comm[1] == expected)) {
          first_residual = pair + " at nu^1: " + to_string(comm[1]) + " instead of " + to_string(expected);
        }
      }
    }
  }
  auto push = [&](const std::string& name, const std::string& residual) {
    report.checks.push_back({name, digest + "; coordinate pairs", residual.empty() ? "0" : residual,
                             residual.empty()});
  };
  push("commutator-even-orders", even_residual);
  push("commutator-diagonal", diagonal_residual);
  if (options.poisson && order >= 1) push("commutator-first-order", first_residual);
  return report;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace starq
