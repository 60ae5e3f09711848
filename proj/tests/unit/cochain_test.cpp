#include <random>
#include <set>

#include <gtest/gtest.h>

#include "random_objects.hpp"
#include "starq/cochain.hpp"
#include "starq/expression.hpp"
#include "starq/star.hpp"

namespace starq {
namespace {

using testing::random_cochain;
using testing::random_explicit_cochain;
using testing::random_polynomial;

Polynomial p(const char* text) { return parse_polynomial(text); }

ExplicitCochain one_term(SlotTuple slots, const Polynomial& c = Polynomial::constant(1)) {
  ExplicitCochain out(static_cast<int>(slots.size()));
  out.add_term(slots, c);
  return out;
}

Polynomial eval_args(const ExplicitCochain& c, std::vector<Polynomial> args) { return eval(c, args); }

TEST(Eval, FirstOrderCochainIsHalfTheBracket) {
  const JetContext z{p("x3"), std::nullopt};
  const Polynomial args[2] = {p("x1"), p("x2")};
  EXPECT_EQ(eval(first_order_cochain(PoissonMode::NablaPhi), z, args), Polynomial::constant(Rational(1, 2)));
}

TEST(Eval, VanishesOnConstants) {
  std::mt19937_64 rng(testing::test_seed());
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_explicit_cochain(rng, 2, 3, 2, 4, true);
    EXPECT_TRUE(eval_args(c, {Polynomial::constant(7), random_polynomial(rng, 3)}).is_zero());
    EXPECT_TRUE(eval_args(c, {random_polynomial(rng, 3), Polynomial::constant(-2)}).is_zero());
  }
}

TEST(Eval, SingleTerm) {
  EXPECT_EQ(eval_args(one_term({MultiIndex{1}, MultiIndex{1}}), {p("x1^2"), p("x1")}), p("2*x1"));
  EXPECT_THROW(eval_args(one_term({MultiIndex{1}, MultiIndex{1}}), {p("x1")}), std::invalid_argument);
}

// Standard coboundary, evaluated through cochain evaluation only.
Polynomial delta_by_eval(const ExplicitCochain& c, const std::vector<Polynomial>& f) {
  const int n = c.arity();
  std::vector<Polynomial> tail(f.begin() + 1, f.end());
  Polynomial out = f[0] * eval(c, tail);
  for (int i = 1; i <= n; ++i) {
    std::vector<Polynomial> merged;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      merged.push_back(j == i - 1 ? f[j] * f[j + 1] : f[j]);
    }
    out += eval(c, merged) * sign_power(i);
  }
  std::vector<Polynomial> head(f.begin(), f.end() - 1);
  out += eval(c, head) * f[n] * sign_power(n + 1);
  return out;
}

TEST(HochschildDelta, MultiplicationIsClosed) { EXPECT_TRUE(hochschild_delta(multiplication<JetPolynomial>()).is_zero()); }

TEST(HochschildDelta, DerivationsAreCocycles) {
  EXPECT_TRUE(hochschild_delta(one_term({MultiIndex{1}})).is_zero());
}

TEST(HochschildDelta, SecondOrderSlotExample) {
  const ExplicitCochain d = hochschild_delta(one_term({MultiIndex{1, 1}, MultiIndex{1}}));
  const ExplicitCochain expected = one_term({MultiIndex{1}, MultiIndex{1}, MultiIndex{1}}, Polynomial::constant(-2));
  EXPECT_EQ(d, expected);
}

TEST(HochschildDelta, SquaresToZero) {
  std::mt19937_64 rng(testing::test_seed() + 1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = random_cochain(rng, 1 + trial % 3, 4, 2);
    EXPECT_TRUE(hochschild_delta(hochschild_delta(c)).is_zero());
  }
}

TEST(HochschildDelta, MatchesEvaluationFormula) {
  std::mt19937_64 rng(testing::test_seed() + 2);
  for (int trial = 0; trial < 15; ++trial) {
    const int arity = 1 + trial % 3;
    const auto c = random_explicit_cochain(rng, arity, 3, 2);
    std::vector<Polynomial> args;
    for (int i = 0; i <= arity; ++i) args.push_back(random_polynomial(rng, 3, 3));
    EXPECT_EQ(eval(hochschild_delta(c), args), delta_by_eval(c, args));
  }
}

TEST(HochschildDelta, FlipsParityOfBilinearCochains) {
  std::mt19937_64 rng(testing::test_seed() + 3);
  auto outer_swap = [](const Cochain& c) {
    Cochain out(3);
    for (const auto& [s, v] : c.terms()) out.add_term({s[2], s[1], s[0]}, v);
    return out;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_cochain(rng, 2, 3, 2, 4, true);
    const auto parts = parity_split(m);
    EXPECT_EQ(outer_swap(hochschild_delta(parts.even)), -hochschild_delta(parts.even));
    EXPECT_EQ(outer_swap(hochschild_delta(parts.odd)), hochschild_delta(parts.odd));
  }
}

// (M∘N)(f) = Σ_i (−1)^{i(n−1)} M(…, N(f_i, …), …), by evaluation.
Polynomial product_by_eval(const ExplicitCochain& m, const ExplicitCochain& n, const std::vector<Polynomial>& f) {
  Polynomial out;
  const int nd = n.arity() - 1;
  for (int i = 0; i < m.arity(); ++i) {
    std::vector<Polynomial> inner(f.begin() + i, f.begin() + i + n.arity());
    std::vector<Polynomial> outer(f.begin(), f.begin() + i);
    outer.push_back(eval(n, inner));
    outer.insert(outer.end(), f.begin() + i + n.arity(), f.end());
    out += eval(m, outer) * sign_power(i * nd);
  }
  return out;
}

TEST(GerstenhaberProduct, ComposesVectorFields) {
  EXPECT_EQ(gerstenhaber_product(one_term({MultiIndex{1}}), one_term({MultiIndex{2}})),
            one_term({MultiIndex{1, 2}}));
}

TEST(GerstenhaberProduct, MultiplicationIsAssociative) {
  const auto mu = multiplication<JetPolynomial>();
  EXPECT_TRUE(gerstenhaber_product(mu, mu).is_zero());
}

TEST(GerstenhaberProduct, MatchesEvaluationFormula) {
  std::mt19937_64 rng(testing::test_seed() + 4);
  for (int trial = 0; trial < 15; ++trial) {
    const auto m = random_explicit_cochain(rng, 1 + trial % 3, 2, 2, 3);
    const auto n = random_explicit_cochain(rng, 1 + (trial / 3) % 3, 2, 2, 3);
    std::vector<Polynomial> args;
    for (int i = 0; i < m.arity() + n.arity() - 1; ++i) args.push_back(random_polynomial(rng, 3, 2));
    EXPECT_EQ(eval(gerstenhaber_product(m, n), args), product_by_eval(m, n, args));
  }
}

TEST(GerstenhaberProduct, FirstOrderSquareOnCoordinates) {
  // Antisymmetrized (M_1∘M_1)(x1,x2,x3) is a multiple of the Jacobiator.
  const JetContext ctx{p("1/2*(x1^2+x2^2+x3^2)"), std::nullopt};
  const ExplicitCochain m1 = specialize(first_order_cochain(PoissonMode::NablaPhi), ctx);
  const std::vector<Polynomial> xyz = {p("x1"), p("x2"), p("x3")};
  const Polynomial direct = product_by_eval(m1, m1, xyz);
  EXPECT_EQ(eval(gerstenhaber_product(m1, m1), xyz), direct);
  EXPECT_TRUE(eval(antisymmetrize(gerstenhaber_product(m1, m1)), xyz).is_zero());
}

TEST(GerstenhaberBracket, CoordinateFieldsCommute) {
  EXPECT_TRUE(gerstenhaber_bracket(one_term({MultiIndex{1}}), one_term({MultiIndex{2}})).is_zero());
}

TEST(GerstenhaberBracket, FirstOrderSelfBracketVanishesOnCoordinates) {
  const Cochain m1 = first_order_cochain(PoissonMode::NablaPhi);
  const Cochain b = gerstenhaber_bracket(m1, m1);
  EXPECT_EQ(b, gerstenhaber_product(m1, m1) * Rational(2));
  const JetContext ctx{p("x1*x2*x3 + x1^3"), std::nullopt};
  const Polynomial xyz[3] = {p("x1"), p("x2"), p("x3")};
  EXPECT_TRUE(eval(antisymmetrize(b), ctx, xyz).is_zero());
}

TEST(GerstenhaberBracket, GradedAntisymmetry) {
  std::mt19937_64 rng(testing::test_seed() + 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_cochain(rng, 1 + trial % 3, 2, 1, 3);
    const auto n = random_cochain(rng, 1 + (trial / 3) % 3, 2, 1, 3);
    const Rational sign = sign_power((m.arity() - 1) * (n.arity() - 1));
    EXPECT_TRUE((gerstenhaber_bracket(m, n) + gerstenhaber_bracket(n, m) * sign).is_zero());
  }
}

TEST(GerstenhaberBracket, PreservesFactorCount) {
  std::mt19937_64 rng(testing::test_seed() + 6);
  auto homogeneous = [&](int degree) {
    Cochain c(2);
    for (int t = 0; t < 3; ++t) {
      JetPolynomial coeff = JetPolynomial::constant(testing::random_rational(rng));
      for (int f = 0; f < degree; ++f) coeff = coeff * jet(JetVariable::phi(testing::random_multi_index(rng, 1, 2)));
      c.add_term({testing::random_multi_index(rng, 1, 2), testing::random_multi_index(rng, 1, 2)}, coeff);
    }
    return c;
  };
  auto degrees = [](const Cochain& c) {
    std::set<int> out;
    for (const auto& [s, v] : c.terms()) {
      for (const auto& [m, q] : v.terms()) out.insert(m.count(Potential::Phi));
    }
    return out;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const Cochain a = homogeneous(1);
    const Cochain b = homogeneous(2);
    const Cochain br = gerstenhaber_bracket(a, b);
    if (!br.is_zero()) EXPECT_EQ(degrees(br), std::set<int>{3});
    const Cochain d = hochschild_delta(b);
    if (!d.is_zero()) EXPECT_EQ(degrees(d), std::set<int>{2});
  }
}

TEST(Antisymmetrize, KillsPairwiseSymmetricCochains) {
  std::mt19937_64 rng(testing::test_seed() + 7);
  const auto t = random_cochain(rng, 3, 2, 1, 4, true);
  Cochain symmetric = t;
  for (const auto& [s, v] : t.terms()) symmetric.add_term({s[1], s[0], s[2]}, v);
  EXPECT_TRUE(antisymmetrize(symmetric).is_zero());
}

TEST(Antisymmetrize, GroupAverageOfCoordinateTerm) {
  const ExplicitCochain a = antisymmetrize(one_term({MultiIndex{1}, MultiIndex{2}, MultiIndex{3}}));
  EXPECT_EQ(a.size(), 6u);
  const MultiIndex e[3] = {MultiIndex{1}, MultiIndex{2}, MultiIndex{3}};
  EXPECT_EQ(a.coefficient({e[0], e[1], e[2]}), Polynomial::constant(Rational(1, 6)));
  EXPECT_EQ(a.coefficient({e[1], e[2], e[0]}), Polynomial::constant(Rational(1, 6)));
  EXPECT_EQ(a.coefficient({e[1], e[0], e[2]}), Polynomial::constant(Rational(-1, 6)));
  EXPECT_EQ(a.coefficient({e[2], e[1], e[0]}), Polynomial::constant(Rational(-1, 6)));
  EXPECT_THROW(antisymmetrize(one_term({MultiIndex{1}, MultiIndex{2}})), std::invalid_argument);
}

TEST(Antisymmetrize, IsIdempotentAndKillsCoboundaries) {
  std::mt19937_64 rng(testing::test_seed() + 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_cochain(rng, 3, 3, 2);
    EXPECT_EQ(antisymmetrize(antisymmetrize(t)), antisymmetrize(t));
    const auto m = random_cochain(rng, 2, 4, 2);
    EXPECT_TRUE(antisymmetrize(hochschild_delta(m)).is_zero());
  }
}

TEST(DegreePart, SelectsExactProfiles) {
  const Cochain m1 = first_order_cochain(PoissonMode::NablaPhi);
  EXPECT_EQ(degree_part(m1, {1, 1}), m1);
  EXPECT_TRUE(degree_part(m1, {2, 1}).is_zero());
  const ExplicitCochain d = hochschild_delta(one_term({MultiIndex{1, 1}, MultiIndex{1}}));
  EXPECT_EQ(degree_part(d, {1, 1, 1}),
            one_term({MultiIndex{1}, MultiIndex{1}, MultiIndex{1}}, Polynomial::constant(-2)));
}

TEST(Reversal, FirstOrderIsAntisymmetric) {
  const Cochain m1 = first_order_cochain(PoissonMode::PsiNablaPhi);
  EXPECT_EQ(reversal(m1), -m1);
  const auto parts = parity_split(m1);
  EXPECT_TRUE(parts.even.is_zero());
  EXPECT_EQ(parts.odd, m1);
}

TEST(Reversal, ParitySplitSumsBack) {
  std::mt19937_64 rng(testing::test_seed() + 9);
  const auto c = random_cochain(rng, 2, 3, 2, 5);
  const auto parts = parity_split(c);
  EXPECT_EQ(parts.even + parts.odd, c);
  EXPECT_TRUE(parity_split(c + reversal(c)).odd.is_zero());
  EXPECT_THROW(reversal(Cochain(3)), std::invalid_argument);
}

}  // namespace
}  // namespace starq
