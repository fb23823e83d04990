#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ordcalc/fock.hpp"
#include "ordcalc/orderings.hpp"
#include "ordcalc/quadrature_rules.hpp"

namespace ordcalc {

/* Complex-plane Gaussian integral with the area measure d^2z / pi:
 *
 *   I = (1/pi) Int d^2z exp( zeta |z|^2 + f z^2 + g z*^2 + xi z + eta z* ).
 *
 * Writing z = x + i y the exponent's quadratic part has the real 2x2 form Q
 * below; the integral converges iff Q is negative definite, and then
 *
 *   I = (zeta^2 - 4 f g)^{-1/2}
 *       exp[ (-zeta xi eta + xi^2 g + eta^2 f) / (zeta^2 - 4 f g) ]
 *
 * with the principal square-root branch (validated by homotopy from
 * f = g = 0 in the tests).
 */
struct GaussianIntegralSpec {
  Complex zeta;
  Complex f;
  Complex g;
  Complex xi;
  Complex eta;
};

struct DivergentIntegral : std::domain_error {
  DivergentIntegral()
      : std::domain_error(
            "gaussian integral diverges: quadratic form is not negative "
            "definite") {}
};

struct DegenerateQuadratic : std::domain_error {
  DegenerateQuadratic()
      : std::domain_error(
            "gaussian integral is degenerate: zeta^2 - 4 f g vanishes") {}
};

struct TailBoundViolation : std::runtime_error {
  TailBoundViolation(double bound_, double radius_)
      : std::runtime_error(
            "gaussian quadrature radius " + std::to_string(radius_) +
            " too small: boundary tail magnitude " + std::to_string(bound_)),
        bound(bound_),
        radius(radius_) {}
  double bound;
  double radius;
};

/// Real quadratic form of the exponent in z = x + i y coordinates:
/// Re[zeta(x^2+y^2) + f(x+iy)^2 + g(x-iy)^2] = (x y) Q (x y)^T.
inline Eigen::Matrix2d gaussian_convergence_form(
    const GaussianIntegralSpec& s) {
  Eigen::Matrix2d q;
  q(0, 0) = s.zeta.real() + (s.f + s.g).real();
  q(1, 1) = s.zeta.real() - (s.f + s.g).real();
  q(0, 1) = q(1, 0) = -(s.f - s.g).imag();
  return q;
}

inline bool gaussian_is_convergent(const GaussianIntegralSpec& s) {
  const Eigen::Matrix2d q = gaussian_convergence_form(s);
  // negative definite <=> leading principal minors alternate: q00 < 0, det > 0
  return q(0, 0) < 0.0 && q.determinant() > 0.0;
}

/// Coefficients of the evaluated integral as a function of the linear
/// sources: I = norm * exp(c_xi_eta xi eta + c_xi2 xi^2 + c_eta2 eta^2).
/// Shared by every caller that reads off operator coefficients from a
/// Gaussian reduction.
struct GaussianNormalForm {
  Complex norm;
  Complex c_xi_eta;
  Complex c_xi2;
  Complex c_eta2;
};

inline GaussianNormalForm gaussian_normal_form(Complex zeta, Complex f,
                                               Complex g) {
  const Complex d = zeta * zeta - 4.0 * f * g;
  const double scale = std::max(std::norm(zeta), 4.0 * std::abs(f * g));
  if (std::abs(d) <= 1e-14 * std::max(scale, 1e-300))
    throw DegenerateQuadratic();
  if (!gaussian_is_convergent({zeta, f, g, Complex(0.0), Complex(0.0)}))
    throw DivergentIntegral();
  GaussianNormalForm out;
  out.norm = 1.0 / std::sqrt(d);  // principal branch
  out.c_xi_eta = -zeta / d;
  out.c_xi2 = g / d;
  out.c_eta2 = f / d;
  return out;
}

inline Complex gaussian_closed_form(const GaussianIntegralSpec& s) {
  const GaussianNormalForm nf = gaussian_normal_form(s.zeta, s.f, s.g);
  return nf.norm * std::exp(nf.c_xi_eta * s.xi * s.eta +
                            nf.c_xi2 * s.xi * s.xi + nf.c_eta2 * s.eta * s.eta);
}

/* Independent evaluation on a tensor Gauss-Legendre grid over the square
 * [-R, R]^2 in z = x + i y.  The radius comes from the tail bound
 *   |integrand| <= exp(lam_max R^2 + sqrt(2) L R)   outside the square,
 * lam_max the largest (least negative) eigenvalue of Q and L the summed
 * magnitude of the linear coefficients; the bound must push the boundary
 * magnitude below exp(-30).  Pass radius > 0 to override the automatic
 * choice -- it is still checked, and TailBoundViolation reports a radius
 * whose tail could contaminate the result.
 */
inline Complex gaussian_quadrature(const GaussianIntegralSpec& s,
                                   int points_per_axis = 160,
                                   double radius = 0.0) {
  if (points_per_axis < 2)
    throw std::invalid_argument("gaussian_quadrature: need >= 2 points");
  if (!gaussian_is_convergent(s)) throw DivergentIntegral();

  const Eigen::Matrix2d q = gaussian_convergence_form(s);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  const double lam_max = es.eigenvalues().maxCoeff();  // < 0 when convergent

  const Complex l1 = s.xi + s.eta;               // coefficient of x
  const Complex l2 = kImag * (s.xi - s.eta);     // coefficient of y
  const double lin = std::abs(l1) + std::abs(l2);
  constexpr double kLogTail = 30.0;  // exp(-30) ~ 1e-13 boundary magnitude

  double r = radius;
  if (r <= 0.0) {
    // Aim two e-folds below the acceptance threshold so the check below
    // cannot trip on rounding of the quadratic-formula root.
    const double target = kLogTail + 2.0;
    r = (std::sqrt(2.0) * lin +
         std::sqrt(2.0 * lin * lin + 4.0 * (-lam_max) * target)) /
        (2.0 * (-lam_max));
  }
  const double tail_exponent = lam_max * r * r + std::sqrt(2.0) * lin * r;
  if (tail_exponent > -kLogTail)
    throw TailBoundViolation(std::exp(tail_exponent), r);

  const QuadratureRule rule = gauss_legendre(points_per_axis, -r, r);
  Complex sum(0.0);
  for (int i = 0; i < points_per_axis; ++i) {
    const double x = rule.nodes[i];
    for (int j = 0; j < points_per_axis; ++j) {
      const double y = rule.nodes[j];
      const Complex z(x, y);
      const Complex zb = std::conj(z);
      const Complex expo = s.zeta * (x * x + y * y) + s.f * z * z +
                           s.g * zb * zb + s.xi * z + s.eta * zb;
      sum += rule.weights[i] * rule.weights[j] * std::exp(expo);
    }
  }
  return sum / std::numbers::pi;
}

/* Gaussian weight that resolves the pq-ordered bilinear exponential over the
 * complex plane:
 *
 *   PQ exp(i kappa p q) =
 *       Int d^2z  w(z)  exp(i z p) exp(sign(kappa) conj(z) q),
 *   w(z) = exp(-|z|^2 / |kappa|) / (pi |kappa|),
 *
 * because the radial moments Int d^2z w z^n conj(z)^m = delta_nm n! |kappa|^n
 * resum the double exponential series into the diagonal bilinear one.
 */
struct UnravelKernel {
  explicit UnravelKernel(double kappa_) : kappa(kappa_) {
    if (kappa == 0.0 || !(std::abs(kappa) < 1.0))
      throw std::invalid_argument(
          "UnravelKernel: kappa must satisfy 0 < |kappa| < 1");
  }

  double weight(Complex z) const {
    return std::exp(-std::norm(z) / std::abs(kappa)) /
           (std::numbers::pi * std::abs(kappa));
  }

  int sign() const { return kappa > 0.0 ? +1 : -1; }

  /// Exponent data of the bare weight for the d^2z/pi measure; its closed
  /// form equals |kappa|, so Int w d^2z = 1.
  GaussianIntegralSpec weight_spec() const {
    return {Complex(-1.0 / std::abs(kappa)), Complex(0.0), Complex(0.0),
            Complex(0.0), Complex(0.0)};
  }

  double kappa;
};

/* Trusted-block distance between the weighted resolution above, evaluated by
 * scaled Gauss-Hermite quadrature, and the bilinear series evaluated
 * directly.  Writing z = sqrt|kappa| (u + i v), both exponential factors are
 * diagonal in the eigenbases of p and q:
 *
 *   exp(izp) exp(s conj(z) q) = U_p D_1(z) (U_p^* U_q) D_2(z) U_q^*,
 *
 * so each quadrature node costs one diagonal-sandwich scaling of the fixed
 * overlap matrix.  Half of the Gaussian weight is folded into each diagonal
 * to keep every factor bounded.  Node order is fixed, so the result is
 * deterministic.
 */
inline double unravel_residual(double kappa, const FockConfig& cfg,
                               int points_per_axis = 60) {
  const UnravelKernel kernel(kappa);
  const TruncatedOperator reference = ordered_exp_pq_bilinear(kappa, cfg);

  auto [q, p] = quadrature_ops(cfg);
  const Eigen::SelfAdjointEigenSolver<Matrix> ep(p.matrix());
  const Eigen::SelfAdjointEigenSolver<Matrix> eq(q.matrix());
  const Eigen::VectorXd lam_p = ep.eigenvalues();
  const Eigen::VectorXd lam_q = eq.eigenvalues();
  const Matrix overlap = ep.eigenvectors().adjoint() * eq.eigenvectors();

  const QuadratureRule rule = gauss_hermite_total(points_per_axis);
  const double s = std::sqrt(std::abs(kappa));
  const double sg = kernel.sign();
  const auto n = static_cast<Eigen::Index>(cfg.truncation);

  Matrix acc = Matrix::Zero(n, n);
  Eigen::VectorXcd d1(n), d2(n);
  for (int i = 0; i < points_per_axis; ++i) {
    const double u = rule.nodes[i];
    for (int j = 0; j < points_per_axis; ++j) {
      const double v = rule.nodes[j];
      const Complex z = s * Complex(u, v);
      const double half_weight = std::exp(-0.5 * (u * u + v * v));
      for (Eigen::Index k = 0; k < n; ++k) {
        d1(k) = half_weight * std::exp(kImag * z * lam_p(k));
        d2(k) = half_weight * std::exp(sg * std::conj(z) * lam_q(k));
      }
      acc.noalias() += (rule.weights[i] * rule.weights[j]) *
                       (d1.asDiagonal() * overlap * d2.asDiagonal());
    }
  }
  const Matrix resolved =
      (ep.eigenvectors() * acc * eq.eigenvectors().adjoint()) / std::numbers::pi;
  return TruncatedOperator(resolved, cfg.trusted_block)
      .trusted_distance(reference);
}

}  // namespace ordcalc
