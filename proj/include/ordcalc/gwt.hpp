#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ordcalc/fock.hpp"
#include "ordcalc/orderings.hpp"
#include "ordcalc/polynomial.hpp"

namespace ordcalc {

/// Thrown when two moment tables differ by an operator-valued amount, so no
/// c-number contraction can connect their ordered exponentials.
struct NonScalarDifference : std::invalid_argument {
  explicit NonScalarDifference(NormalPolynomial diff)
      : std::invalid_argument(
            "contraction: moment tables differ by a non-scalar operator"),
        difference(std::move(diff)) {}
  NormalPolynomial difference;
};

/// Thrown when a matrix cross-check of an algebraic identity exceeds its
/// tolerance.
struct VerificationFailure : std::runtime_error {
  VerificationFailure(const std::string& what, double residual_,
                      double tolerance_)
      : std::runtime_error(what + ": residual " + std::to_string(residual_) +
                           " exceeds tolerance " + std::to_string(tolerance_)),
        residual(residual_),
        tolerance(tolerance_) {}
  double residual;
  double tolerance;
};

/* Core identity: for X = alpha q + beta p and two ordering symbols S (source)
 * and T (target) whose second-moment images differ only by c-numbers,
 *
 *     S exp(X) = exp(C) * T exp(X),   C = 1/2 [ (S X^2) - (T X^2) ].
 *
 * Proof sketch: inside an ordering symbol q and p commute, so
 * O exp(X) = sum_k (O X^k)/k!, and the moment shift exponentiates term by
 * term when it is scalar.  The table-level overload is the checkable core;
 * the OrderingKind overload is the everyday entry point.
 */
inline Complex contraction_from_tables(const MomentTable& source,
                                       const MomentTable& target,
                                       const LinearForm& x) {
  const Complex a2 = x.alpha * x.alpha;
  const Complex b2 = x.beta * x.beta;
  const Complex ab = x.alpha * x.beta;
  NormalPolynomial diff = a2 * (source.q_squared - target.q_squared) +
                          b2 * (source.p_squared - target.p_squared) +
                          (2.0 * ab) * (source.mixed - target.mixed);
  if (!diff.is_scalar()) throw NonScalarDifference(std::move(diff));
  return 0.5 * diff.scalar_part();
}

inline Complex general_contraction(const OrderingKind& source,
                                   const OrderingKind& target,
                                   const LinearForm& x) {
  return contraction_from_tables(source.moment_table(), target.moment_table(),
                                 x);
}

/// Contraction that rewrites the pq-ordered exponential with argument
/// X = s conj(z) q + i z p  (s = +1 or -1) as a normal-ordered one:
///     PQ exp(X) = exp(C) N exp(X).
inline Complex pq_to_normal_contraction(Complex z, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("pq_to_normal_contraction: sign must be +-1");
  const LinearForm x{static_cast<double>(sign) * std::conj(z), kImag * z};
  return general_contraction(OrderingKind::pq(), OrderingKind::normal(), x);
}

/// One scalar factor peeled off while rearranging exponentials whose
/// generators have a c-number commutator ([A,B] scalar implies
/// exp(A+B) = exp(A) exp(B) exp(-[A,B]/2) and
/// exp(A) exp(B) = exp([A,B]) exp(B) exp(A)).
struct BchStep {
  std::string label;
  Complex value;
};

struct BchFactorization {
  Complex total;                  // product of the three steps' exponents
  std::array<BchStep, 3> steps;
};

/// Commutator of u1 a + v1 adag with u2 a + v2 adag (always a c-number).
inline Complex ladder_commutator(Complex u1, Complex v1, Complex u2,
                                 Complex v2) {
  return u1 * v2 - v1 * u2;
}

/* Rearranges exp(beta p) exp(alpha q) -- the pq-ordered exponential of
 * X = alpha q + beta p -- into exp(C) exp(l+ adag) exp(l- a) by three scalar
 * moves.  With p = u1 a + v1 adag (u1 = -i beta/sqrt2, v1 = i beta/sqrt2
 * scaled) and q = (a + adag) alpha/sqrt2:
 *
 *   1. split exp(beta p)  = exp(beta^2/4)  exp(v1 adag) exp(u1 a)
 *   2. split exp(alpha q) = exp(alpha^2/4) exp(v2 adag) exp(u2 a)
 *   3. swap the middle pair exp(u1 a) exp(v2 adag):
 *        picks up exp([u1 a, v2 adag]) = exp(-i alpha beta / 2)
 *
 * after which the adag factors merge into l+ = (alpha + i beta)/sqrt2 and the
 * a factors into l- = (alpha - i beta)/sqrt2.  The total must agree with
 * general_contraction(pq, normal) -- the tests pin both routes together.
 */
inline BchFactorization bch_three_step(Complex alpha, Complex beta) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex u1 = -kImag * beta * inv_sqrt2;  // a part of beta p
  const Complex v1 = kImag * beta * inv_sqrt2;   // adag part of beta p
  const Complex u2 = alpha * inv_sqrt2;          // a part of alpha q
  const Complex v2 = alpha * inv_sqrt2;          // adag part of alpha q

  BchFactorization out;
  out.steps[0] = {"split-momentum-exponential",
                  -0.5 * ladder_commutator(0.0, v1, u1, 0.0)};
  out.steps[1] = {"split-position-exponential",
                  -0.5 * ladder_commutator(0.0, v2, u2, 0.0)};
  out.steps[2] = {"swap-middle-pair", ladder_commutator(u1, 0.0, 0.0, v2)};
  out.total = out.steps[0].value + out.steps[1].value + out.steps[2].value;
  return out;
}

/// Result of a matrix-level check of the reordering identity.
struct ReorderCheck {
  Complex contraction;  // the scalar C connecting the two ordered exponentials
  double residual;      // trusted-block distance between the two sides
};

/* Verifies S exp(X) = exp(C) T exp(X) numerically: realizes both ordered
 * exponentials in the truncated number basis and compares trusted blocks.
 * Throws VerificationFailure when the residual exceeds cfg.tolerance.
 */
inline ReorderCheck reorder_exponential(const OrderingKind& source,
                                        const OrderingKind& target,
                                        const LinearForm& x,
                                        const FockConfig& cfg) {
  const Complex c = general_contraction(source, target, x);
  TruncatedOperator lhs = ordered_exp_linear(source, x, cfg);
  TruncatedOperator rhs = std::exp(c) * ordered_exp_linear(target, x, cfg);
  const double residual = lhs.trusted_distance(rhs);
  if (!(residual <= cfg.tolerance))
    throw VerificationFailure("reorder_exponential(" + source.name() + " -> " +
                                  target.name() + ")",
                              residual, cfg.tolerance);
  return {c, residual};
}

}  // namespace ordcalc
