#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "random_objects.hpp"
#include "starq/error.hpp"
#include "starq/expression.hpp"
#include "starq/opo.hpp"
#include "starq/star.hpp"

namespace starq {
namespace {

// Tries every permutation of the factor list.
bool opo_by_permutations(const AbstractTerm& t) {
  std::vector<std::size_t> order(t.factors.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<std::size_t> position(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
    bool good = true;
    for (std::size_t a = 0; a < t.factors.size() && good; ++a) {
      for (Label u : t.factors[a].upper) {
        bool to_right = false;
        for (const auto& arg : t.args) {
          if (std::count(arg.begin(), arg.end(), u)) to_right = true;
        }
        for (std::size_t b = 0; b < t.factors.size(); ++b) {
          const auto& lower = t.factors[b].lower;
          if (std::count(lower.begin(), lower.end(), u) && position[b] > position[a]) to_right = true;
        }
        good = good && to_right;
      }
    }
    if (good) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

TEST(IsOpo, PoissonBracketIsOrdered) {
  const OpoResult r = is_opo(poisson_bracket_term());
  EXPECT_TRUE(r.is_opo);
  EXPECT_EQ(r.arrangement, std::vector<std::size_t>{0});
  EXPECT_TRUE(is_opo(parse_abstract_term("P(i,j) @1(i) @2(j)")).is_opo);
}

TEST(IsOpo, MutuallyContractedPairIsNotOrdered) {
  const AbstractTerm t = parse_abstract_term("dP(r;i,s) dP(s;j,r) @1(i) @2(j)");
  const OpoResult r = is_opo(t);
  EXPECT_FALSE(r.is_opo);
  EXPECT_TRUE(r.arrangement.empty());
  EXPECT_FALSE(opo_by_permutations(t));
}

TEST(IsOpo, JacobiIdentityTermsAreOrdered) {
  const AbstractOperator terms = jacobi_identity_terms();
  ASSERT_EQ(terms.size(), 3u);
  for (const auto& t : terms) {
    const OpoResult r = is_opo(t);
    EXPECT_TRUE(r.is_opo) << to_string(t);
    EXPECT_TRUE(is_opo_arrangement(t, r.arrangement));
  }
}

TEST(IsOpo, SelfContractionIsNeverOrdered) {
  EXPECT_FALSE(is_opo(parse_abstract_term("dP(i;i,j) @1(j)")).is_opo);
}

TEST(IsOpo, AgreesWithPermutationSearchOnAllSmallGraphs) {
  for (int factors : {1, 2, 3}) {
    std::size_t ordered = 0;
    for (const auto& t : enumerate_bilinear_graphs(factors, false)) {
      const OpoResult r = is_opo(t);
      ASSERT_EQ(r.is_opo, opo_by_permutations(t)) << to_string(t);
      if (r.is_opo) {
        ++ordered;
        EXPECT_TRUE(is_opo_arrangement(t, r.arrangement));
      }
    }
    EXPECT_GT(ordered, 0u);
  }
}

TEST(IsOpo, OrderedEnumerationIsOrdered) {
  EXPECT_EQ(enumerate_bilinear_graphs(2, true).size(), 3u);
  EXPECT_EQ(enumerate_bilinear_graphs(3, true).size(), 18u);
  for (const auto& t : enumerate_bilinear_graphs(3, true)) {
    std::vector<std::size_t> identity(t.factors.size());
    std::iota(identity.begin(), identity.end(), 0);
    EXPECT_TRUE(is_opo_arrangement(t, identity)) << to_string(t);
  }
}

TEST(IsOpo, IndependentOfFactorOrderAndLabels) {
  std::mt19937_64 rng(testing::test_seed());
  for (int trial = 0; trial < 50; ++trial) {
    const AbstractTerm t = random_opo_term(rng);
    const OpoResult r = is_opo(t);
    EXPECT_TRUE(r.is_opo) << to_string(t);
    EXPECT_TRUE(opo_by_permutations(t));
    AbstractTerm shuffled = t;
    std::shuffle(shuffled.factors.begin(), shuffled.factors.end(), rng);
    EXPECT_TRUE(is_opo(shuffled).is_opo);
    EXPECT_EQ(is_opo(t).arrangement, r.arrangement);
  }
}

TEST(Concretize, PoissonBracketGivesFirstOrderCochain) {
  for (auto mode : {PoissonMode::NablaPhi, PoissonMode::PsiNablaPhi}) {
    EXPECT_EQ(concretize(poisson_bracket_term(), mode), first_order_cochain(mode) * Rational(2));
  }
}

TEST(Concretize, SymmetricContractionVanishes) {
  EXPECT_TRUE(concretize(parse_abstract_term("P(i,j) @1(i,j)"), PoissonMode::NablaPhi).is_zero());
  EXPECT_TRUE(concretize(parse_abstract_term("P(i,j) dP(i,j;k,l) @1(k) @2(l)"), PoissonMode::NablaPhi).is_zero());
}

TEST(Concretize, NotOrderedTermMatchesIndexSum) {
  // Σ ∂_r P^{is} ∂_s P^{jr} ∂_i f ∂_j g with P^{ij} = ε_{ijk} ∂_k φ, summed by hand.
  const Polynomial phi = parse_polynomial("x1*x2*x3");
  auto entry = [&](int i, int j) {
    Polynomial out;
    for (int k = 1; k <= 3; ++k) out += derivative(phi, k) * Rational(levi_civita(i, j, k));
    return out;
  };
  const Polynomial f = parse_polynomial("x1^2*x2 + x3");
  const Polynomial g = parse_polynomial("x2*x3^2 - x1");
  Polynomial direct;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      for (int r = 1; r <= 3; ++r) {
        for (int s = 1; s <= 3; ++s) {
          direct += derivative(entry(i, s), r) * derivative(entry(j, r), s) * derivative(f, i) * derivative(g, j);
        }
      }
    }
  }
  const Cochain c = concretize(parse_abstract_term("dP(r;i,s) dP(s;j,r) @1(i) @2(j)"), PoissonMode::NablaPhi);
  const Polynomial args[2] = {f, g};
  EXPECT_EQ(eval(c, JetContext{phi, std::nullopt}, args), direct);
  const Rational one[3] = {Rational(1), Rational(1), Rational(1)};
  EXPECT_EQ(evaluate(eval(c, JetContext{phi, std::nullopt}, args), one), evaluate(direct, one));
}

TEST(JacobiExample, VanishesInBothModes) {
  EXPECT_EQ(jacobi_example_terms().size(), 6u);
  EXPECT_TRUE(jacobi_example_check(PoissonMode::NablaPhi).is_zero());
  EXPECT_TRUE(jacobi_example_check(PoissonMode::PsiNablaPhi).is_zero());
}

TEST(JacobiExample, OrderedTermAloneIsNonzero) {
  const AbstractTerm t = jacobi_example_opo_term();
  EXPECT_TRUE(is_opo(t).is_opo);
  EXPECT_FALSE(concretize(t, PoissonMode::NablaPhi).is_zero());
  const auto& terms = jacobi_example_terms();
  const auto ordered = std::count_if(terms.begin(), terms.end(), [](const auto& x) { return is_opo(x).is_opo; });
  EXPECT_GE(ordered, 1);
  EXPECT_LT(ordered, 6);
}

TEST(Closure, DeltaAndBracketOfOrderedTermsAreOrdered) {
  std::mt19937_64 rng(testing::test_seed() + 1);
  for (int trial = 0; trial < 30; ++trial) {
    const AbstractTerm s = random_opo_term(rng);
    const AbstractTerm t = random_opo_term(rng);
    for (const auto& term : abstract_delta(t)) EXPECT_TRUE(is_opo(term).is_opo) << to_string(term);
    for (const auto& term : abstract_bracket(s, t)) EXPECT_TRUE(is_opo(term).is_opo) << to_string(term);
  }
}

TEST(Closure, AbstractOperationsCommuteWithConcretization) {
  std::mt19937_64 rng(testing::test_seed() + 2);
  RandomTermOptions small;
  small.max_factors = 2;
  small.max_arity = 2;
  small.max_labels_per_argument = 2;
  for (int trial = 0; trial < 8; ++trial) {
    const AbstractTerm s = random_opo_term(rng, small);
    const AbstractTerm t = random_opo_term(rng, small);
    const auto mode = PoissonMode::NablaPhi;
    EXPECT_EQ(concretize(abstract_delta(t), mode), hochschild_delta(concretize(t, mode)));
    EXPECT_EQ(concretize(abstract_product(s, t), mode), gerstenhaber_product(concretize(s, mode), concretize(t, mode)));
    EXPECT_EQ(concretize(abstract_bracket(s, t), mode), gerstenhaber_bracket(concretize(s, mode), concretize(t, mode)));
  }
}

TEST(Grammar, RoundTripsAndRejectsMalformedInput) {
  std::mt19937_64 rng(testing::test_seed() + 3);
  for (int trial = 0; trial < 20; ++trial) {
    const AbstractTerm t = random_opo_term(rng);
    const AbstractTerm back = parse_abstract_term(to_string(t));
    EXPECT_EQ(concretize(back, PoissonMode::NablaPhi), concretize(t, PoissonMode::NablaPhi));
  }
  EXPECT_EQ(parse_abstract("P(i,j) @1(i) @2(j) - 1/2 P(i,j) @1(j) @2(i)").size(), 2u);
  EXPECT_THROW(parse_abstract_term("P(i) @1(i)"), ParseError);
  EXPECT_THROW(parse_abstract_term("P(i,j) @1(i)"), std::exception);
  EXPECT_THROW(parse_abstract_term("Q(i,j) @1(i) @2(j)"), ParseError);
  EXPECT_THROW(parse_abstract_term("P(i,j) @1(i) @2(j"), ParseError);
}

TEST(Canonicalization, UpperPairsAreSortedWithSign) {
  AbstractTerm swapped = poisson_bracket_term();
  std::swap(swapped.factors[0].upper[0], swapped.factors[0].upper[1]);
  const AbstractTerm c = with_canonical_signs(swapped);
  EXPECT_EQ(c.coefficient, -swapped.coefficient);
  EXPECT_LT(c.factors[0].upper[0], c.factors[0].upper[1]);
  EXPECT_EQ(concretize(c, PoissonMode::NablaPhi), concretize(swapped, PoissonMode::NablaPhi));
  EXPECT_EQ(concretize(swapped, PoissonMode::NablaPhi), -concretize(poisson_bracket_term(), PoissonMode::NablaPhi));
}

}  // namespace
}  // namespace starq
