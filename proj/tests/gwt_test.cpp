#include "ordcalc/gwt.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <vector>

#include "ordcalc/fock.hpp"
#include "ordcalc/orderings.hpp"
#include "ordcalc/polynomial.hpp"

namespace ordcalc {
namespace {

Complex random_complex(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

// Linear form whose pq-ordered exponential appears in weighted resolutions of
// bilinear exponentials: X = s conj(z) q + i z p.
LinearForm unraveling_form(Complex z, int sign) {
  return {static_cast<double>(sign) * std::conj(z), kImag * z};
}

std::vector<OrderingKind> all_orderings() {
  MomentTable shifted = OrderingKind::normal().moment_table();
  shifted.q_squared += NormalPolynomial(Complex(0.0, 0.25));
  shifted.mixed += NormalPolynomial(Complex(-0.125, 0.0));
  return {OrderingKind::pq(), OrderingKind::qp(), OrderingKind::normal(),
          OrderingKind::antinormal(), OrderingKind::custom(shifted)};
}

TEST(Contraction, PqToNormalClosedFormValues) {
  // C = (alpha^2 + beta^2)/4 - i alpha beta / 2 with alpha = s conj(z),
  // beta = i z, worked out by hand for two pinned arguments.
  const Complex c1 = pq_to_normal_contraction(Complex(1.0, 0.0), +1);
  EXPECT_NEAR(std::abs(c1 - Complex(0.5, 0.0)), 0.0, 1e-15);

  const Complex c2 = pq_to_normal_contraction(Complex(1.0, 1.0), +1);
  EXPECT_NEAR(std::abs(c2 - Complex(1.0, -1.0)), 0.0, 1e-15);

  const Complex c3 = pq_to_normal_contraction(Complex(1.0, 0.0), -1);
  EXPECT_NEAR(std::abs(c3 - Complex(-0.5, 0.0)), 0.0, 1e-15);
}

TEST(Contraction, RejectsBadSign) {
  EXPECT_THROW(pq_to_normal_contraction(Complex(1.0, 0.0), 0),
               std::invalid_argument);
  EXPECT_THROW(pq_to_normal_contraction(Complex(1.0, 0.0), 2),
               std::invalid_argument);
}

TEST(Contraction, TableOverloadRejectsOperatorValuedDifference) {
  MomentTable bad = OrderingKind::normal().moment_table();
  bad.mixed += NormalPolynomial::monomial(1, 1, 0.1);
  const LinearForm x{Complex(1.0, 0.0), Complex(0.5, 0.0)};  // alpha beta != 0
  try {
    contraction_from_tables(bad, OrderingKind::normal().moment_table(), x);
    FAIL() << "expected NonScalarDifference";
  } catch (const NonScalarDifference& e) {
    EXPECT_FALSE(e.difference.is_scalar());
  }
}

TEST(Contraction, AntisymmetricInItsOrderings) {
  auto kinds = all_orderings();
  std::mt19937 rng(811u);
  for (int trial = 0; trial < 100; ++trial) {
    const LinearForm x{random_complex(rng), random_complex(rng)};
    for (const auto& a : kinds)
      for (const auto& b : kinds) {
        const Complex fwd = general_contraction(a, b, x);
        const Complex bwd = general_contraction(b, a, x);
        EXPECT_LT(std::abs(fwd + bwd), 1e-14);
      }
  }
}

TEST(Contraction, ChainRuleAcrossIntermediateOrdering) {
  auto kinds = all_orderings();
  std::mt19937 rng(812u);
  for (int trial = 0; trial < 100; ++trial) {
    const LinearForm x{random_complex(rng), random_complex(rng)};
    for (const auto& a : kinds)
      for (const auto& b : kinds)
        for (const auto& c : kinds) {
          const Complex direct = general_contraction(a, c, x);
          const Complex via = general_contraction(a, b, x) +
                              general_contraction(b, c, x);
          EXPECT_LT(std::abs(direct - via), 1e-14);
        }
  }
}

TEST(Contraction, QuadraticInTheLinearForm) {
  std::mt19937 rng(813u);
  for (int trial = 0; trial < 100; ++trial) {
    const LinearForm x{random_complex(rng), random_complex(rng)};
    const Complex t = random_complex(rng);
    const LinearForm tx{t * x.alpha, t * x.beta};
    const Complex base =
        general_contraction(OrderingKind::pq(), OrderingKind::normal(), x);
    const Complex scaled =
        general_contraction(OrderingKind::pq(), OrderingKind::normal(), tx);
    EXPECT_LT(std::abs(scaled - t * t * base), 1e-12);
  }
}

TEST(BchThreeStep, PinnedExamplesWithStepLog) {
  const BchFactorization f1 = bch_three_step(Complex(1.0, 0.0), Complex(0.0));
  EXPECT_LT(std::abs(f1.total - Complex(0.25, 0.0)), 1e-15);
  EXPECT_EQ(f1.steps[0].label, "split-momentum-exponential");
  EXPECT_EQ(f1.steps[1].label, "split-position-exponential");
  EXPECT_EQ(f1.steps[2].label, "swap-middle-pair");
  EXPECT_LT(std::abs(f1.steps[0].value), 1e-15);
  EXPECT_LT(std::abs(f1.steps[1].value - Complex(0.25, 0.0)), 1e-15);
  EXPECT_LT(std::abs(f1.steps[2].value), 1e-15);

  const BchFactorization f2 =
      bch_three_step(Complex(1.0, 0.0), Complex(0.0, 1.0));
  EXPECT_LT(std::abs(f2.total - Complex(0.5, 0.0)), 1e-15);

  const BchFactorization f3 = bch_three_step(Complex(0.0), Complex(1.0, 0.0));
  EXPECT_LT(std::abs(f3.total - Complex(0.25, 0.0)), 1e-15);
}

TEST(BchThreeStep, TotalMatchesContractionOnRandomArguments) {
  std::mt19937 rng(814u);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex z = random_complex(rng);
    const int sign = (trial % 2 == 0) ? +1 : -1;
    const LinearForm x = unraveling_form(z, sign);
    const Complex via_bch = bch_three_step(x.alpha, x.beta).total;
    const Complex via_tables = pq_to_normal_contraction(z, sign);
    EXPECT_LT(std::abs(via_bch - via_tables), 1e-14);
  }
}

TEST(BchThreeStep, FactorsReproduceThePqExponential) {
  // Assemble exp(total) exp(l+ adag) exp(l- a) straight from the step data
  // and compare against exp(beta p) exp(alpha q) in the number basis.
  const FockConfig cfg{40, 12, 1e-9};
  const Complex alpha(0.4, -0.3), beta(0.2, 0.5);
  const BchFactorization f = bch_three_step(alpha, beta);
  const LinearForm x{alpha, beta};

  auto [q, p] = quadrature_ops(cfg);
  auto [a, adag] = ladder_ops(cfg);
  TruncatedOperator lhs = matrix_exp(beta * p) * matrix_exp(alpha * q);
  TruncatedOperator rhs = std::exp(f.total) *
                          (matrix_exp(x.ladder_plus() * adag) *
                           matrix_exp(x.ladder_minus() * a));
  EXPECT_LT(lhs.trusted_distance(rhs), 1e-9);
}

TEST(ReorderExponential, AllBuiltinPairsAgreeInMatrixForm) {
  const FockConfig cfg{40, 12, 1e-9};
  const LinearForm x{Complex(0.4, -0.3), Complex(0.2, 0.5)};
  std::vector<OrderingKind> kinds = {
      OrderingKind::pq(), OrderingKind::qp(), OrderingKind::normal(),
      OrderingKind::antinormal()};
  for (const auto& s : kinds)
    for (const auto& t : kinds) {
      ReorderCheck check = reorder_exponential(s, t, x, cfg);
      EXPECT_GE(check.residual, 0.0);
      EXPECT_LT(check.residual, 1e-9) << s.name() << " -> " << t.name();
      const Complex back = general_contraction(t, s, x);
      EXPECT_LT(std::abs(check.contraction + back), 1e-14);
    }
}

TEST(ReorderExponential, UnravelingFormsBothSigns) {
  const FockConfig cfg{40, 12, 1e-9};
  const Complex z(0.3, 0.2);
  for (int sign : {+1, -1}) {
    const LinearForm x = unraveling_form(z, sign);
    ReorderCheck check =
        reorder_exponential(OrderingKind::pq(), OrderingKind::normal(), x, cfg);
    EXPECT_LT(check.residual, 1e-9);
    EXPECT_LT(std::abs(check.contraction - pq_to_normal_contraction(z, sign)),
              1e-14);
  }
}

TEST(ReorderExponential, ReportsResidualWhenToleranceUnreachable) {
  const FockConfig cfg{40, 12, 1e-300};
  const LinearForm x{Complex(0.4, 0.0), Complex(0.0, 0.0)};
  try {
    reorder_exponential(OrderingKind::pq(), OrderingKind::normal(), x, cfg);
    FAIL() << "expected VerificationFailure";
  } catch (const VerificationFailure& e) {
    EXPECT_GT(e.residual, 0.0);
    EXPECT_EQ(e.tolerance, 1e-300);
  }
}

TEST(ReorderExponential, CustomOrderingHasNoMatrixForm) {
  const FockConfig cfg{16, 5, 1e-9};
  MomentTable shifted = OrderingKind::normal().moment_table();
  shifted.p_squared += NormalPolynomial(Complex(0.1, 0.0));
  const LinearForm x{Complex(0.3, 0.0), Complex(0.1, 0.0)};
  EXPECT_THROW(reorder_exponential(OrderingKind::custom(shifted),
                                   OrderingKind::normal(), x, cfg),
               std::invalid_argument);
}

}  // namespace
}  // namespace ordcalc
