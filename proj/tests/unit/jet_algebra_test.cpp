#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "random_objects.hpp"
#include "starq/error.hpp"
#include "starq/expression.hpp"
#include "starq/jet.hpp"
#include "starq/serialization.hpp"

namespace starq {
namespace {

JetPolynomial phi(std::initializer_list<int> index) { return jet(JetVariable::phi(MultiIndex(index))); }
JetPolynomial psi(std::initializer_list<int> index) { return jet(JetVariable::psi(MultiIndex(index))); }

TEST(Rational, AlwaysInLowestTerms) {
  EXPECT_EQ(to_string(parse_rational("6/-4")), "-3/2");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_string(parse_rational("7")), "7/1");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("x"), ParseError);
}

TEST(MultiIndex, StoresIndicesSorted) {
  EXPECT_EQ(MultiIndex({2, 1, 1}), MultiIndex({1, 1, 2}));
  EXPECT_EQ(MultiIndex({3, 1}).digits(), "13");
  EXPECT_EQ(MultiIndex({1, 2}).order(), 2);
  EXPECT_TRUE(MultiIndex{}.empty());
  EXPECT_EQ(MultiIndex({1}) + MultiIndex({2, 1}), MultiIndex({1, 1, 2}));
}

TEST(JetPolynomial, MixedPartialsCommute) { EXPECT_TRUE((phi({1, 2}) - phi({2, 1})).is_zero()); }

TEST(JetPolynomial, FactorsCommute) {
  const JetPolynomial sum = canonicalize({
      {Rational(2), {JetVariable::phi(MultiIndex{1}), JetVariable::phi(MultiIndex{2})}},
      {Rational(3), {JetVariable::phi(MultiIndex{2}), JetVariable::phi(MultiIndex{1})}},
  });
  EXPECT_EQ(sum, phi({1}) * phi({2}) * Rational(5));
  EXPECT_EQ(sum.size(), 1u);
}

TEST(JetPolynomial, LikeTermsMerge) {
  EXPECT_EQ(phi({1}) * Rational(1, 2) + phi({1}) * Rational(1, 2), phi({1}));
}

TEST(JetPolynomial, RingAxiomsOnRandomInputs) {
  std::mt19937_64 rng(testing::test_seed());
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = testing::random_jet_polynomial(rng, 2);
    const auto b = testing::random_jet_polynomial(rng, 2);
    const auto c = testing::random_jet_polynomial(rng, 2);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(JetPolynomial, CanonicalizeIsOrderInsensitiveAndIdempotent) {
  std::mt19937_64 rng(testing::test_seed() + 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RawJetTerm> raw;
    for (int t = 0; t < 5; ++t) {
      RawJetTerm term{testing::random_rational(rng), {}};
      for (int f = 0; f < 3; ++f) term.factors.push_back(JetVariable::phi(testing::random_multi_index(rng, 1, 3)));
      raw.push_back(term);
    }
    const JetPolynomial once = canonicalize(raw);
    std::shuffle(raw.begin(), raw.end(), rng);
    for (auto& t : raw) std::shuffle(t.factors.begin(), t.factors.end(), rng);
    EXPECT_EQ(canonicalize(raw), once);
    std::vector<RawJetTerm> again;
    for (const auto& [m, c] : once.terms()) again.push_back({c, m.factors()});
    EXPECT_EQ(canonicalize(again), once);
  }
}

TEST(JetPolynomial, DerivativeFollowsLeibniz) {
  const JetPolynomial p = phi({1}) * phi({2, 3}) * psi({});
  const JetPolynomial expected =
      phi({1, 1}) * phi({2, 3}) * psi({}) + phi({1}) * phi({1, 2, 3}) * psi({}) + phi({1}) * phi({2, 3}) * psi({1});
  EXPECT_EQ(derivative(p, 1), expected);
}

TEST(SubstituteP, UsesEpsilonConvention) {
  const auto mode = PoissonMode::NablaPhi;
  EXPECT_EQ(substitute_P(PJet{1, 2, {}}, mode), phi({3}));
  EXPECT_EQ(substitute_P(PJet{2, 3, {}}, mode), phi({1}));
  EXPECT_EQ(substitute_P(PJet{3, 1, {}}, mode), phi({2}));
  EXPECT_EQ(substitute_P(PJet{2, 1, {}}, mode), -phi({3}));
  EXPECT_TRUE(substitute_P(PJet{1, 1, {}}, mode).is_zero());
  EXPECT_EQ(substitute_P(PJet{3, 1, MultiIndex{2}}, mode), phi({2, 2}));
  EXPECT_THROW(substitute_P(PJet{0, 1, {}}, mode), std::out_of_range);
  EXPECT_THROW(substitute_P(PJet{1, 4, {}}, mode), std::out_of_range);
}

TEST(SubstituteP, PsiModeMultipliesByPsi) {
  const auto mode = PoissonMode::PsiNablaPhi;
  EXPECT_EQ(substitute_P(PJet{1, 2, {}}, mode), psi({}) * phi({3}));
  EXPECT_EQ(substitute_P(PJet{1, 2, MultiIndex{1}}, mode), psi({1}) * phi({3}) + psi({}) * phi({1, 3}));
}

TEST(EvalJets, GroundsJetsInPotentials) {
  const JetContext xyz{parse_polynomial("x1*x2*x3"), std::nullopt};
  EXPECT_EQ(eval_jets(phi({1}), xyz), parse_polynomial("x2*x3"));
  EXPECT_EQ(eval_jets(phi({1}) * phi({2, 3}), xyz), parse_polynomial("x1*x2*x3"));
  const JetContext quadratic{parse_polynomial("1/2*(x1^2+x2^2+x3^2)"), std::nullopt};
  EXPECT_TRUE(eval_jets(phi({1, 2}), quadratic).is_zero());
  EXPECT_THROW(eval_jets(psi({}), xyz), std::invalid_argument);
}

TEST(EvalJets, IsARingHomomorphism) {
  std::mt19937_64 rng(testing::test_seed() + 2);
  for (int trial = 0; trial < 20; ++trial) {
    const JetContext ctx{testing::random_polynomial(rng, 4), testing::random_polynomial(rng, 2)};
    const auto a = testing::random_jet_polynomial(rng, 2);
    const auto b = testing::random_jet_polynomial(rng, 2);
    EXPECT_EQ(eval_jets(a * b, ctx), eval_jets(a, ctx) * eval_jets(b, ctx));
    EXPECT_EQ(eval_jets(a + b, ctx), eval_jets(a, ctx) + eval_jets(b, ctx));
  }
}

// P^{23} = φ_1, P^{31} = φ_2, P^{12} = φ_3, differentiated directly.
Polynomial poisson_entry(const Polynomial& potential, int i, int j) {
  if (i == j) return {};
  if (i == 2 && j == 3) return derivative(potential, 1);
  if (i == 3 && j == 1) return derivative(potential, 2);
  if (i == 1 && j == 2) return derivative(potential, 3);
  return -poisson_entry(potential, j, i);
}

TEST(SubstituteP, AgreesWithDirectDifferentiation) {
  std::mt19937_64 rng(testing::test_seed() + 3);
  for (int trial = 0; trial < 10; ++trial) {
    const JetContext ctx{testing::random_polynomial(rng, 4, 6), std::nullopt};
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const MultiIndex lower = testing::random_multi_index(rng, 0, 3);
        const Polynomial direct = derivative(poisson_entry(ctx.phi, i, j), lower);
        EXPECT_EQ(eval_jets(substitute_P(PJet{i, j, lower}, PoissonMode::NablaPhi), ctx), direct);
      }
    }
  }
}

TEST(Expression, ParsesPolynomials) {
  EXPECT_EQ(parse_polynomial("x1^2*x2 - 1/2*x3"), monomial_x(2, 1, 0) - monomial_x(0, 0, 1, Rational(1, 2)));
  EXPECT_EQ(parse_polynomial("(x1+x2)^2"), parse_polynomial("x1^2 + 2*x1*x2 + x2^2"));
  EXPECT_EQ(parse_polynomial("-x3"), -coordinate(3));
  EXPECT_THROW(parse_polynomial("x4"), ParseError);
  EXPECT_THROW(parse_polynomial("x1/x2"), ParseError);
  EXPECT_THROW(parse_polynomial("1/0"), ParseError);
  EXPECT_THROW(parse_polynomial("x1 +"), ParseError);
  EXPECT_THROW(parse_polynomial(""), ParseError);
}

TEST(JetVariable, SerializesAsSortedDigits) {
  EXPECT_EQ(JetVariable::phi(MultiIndex{2, 1, 1}).name(), "phi_112");
  EXPECT_EQ(JetVariable::psi(MultiIndex{}).name(), "psi_");
  EXPECT_EQ(JetVariable::parse("phi_211"), JetVariable::phi(MultiIndex{1, 1, 2}));
  EXPECT_THROW(JetVariable::parse("phi_"), ParseError);
  EXPECT_THROW(JetVariable::parse("chi_1"), ParseError);
}

TEST(JetPolynomial, JsonRoundTrip) {
  std::mt19937_64 rng(testing::test_seed() + 4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_jet_polynomial(rng, 3);
    EXPECT_EQ(jet_polynomial_from_json(to_json(p)), p);
  }
  const Json j = to_json(phi({1, 2}) * Rational(3, 2));
  EXPECT_EQ(j.dump(), R"([{"coeff":"3/2","factors":["phi_12"]}])");
}

}  // namespace
}  // namespace starq
