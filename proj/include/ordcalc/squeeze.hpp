#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ordcalc/fock.hpp"
#include "ordcalc/gaussian.hpp"
#include "ordcalc/gwt.hpp"
#include "ordcalc/hermite.hpp"
#include "ordcalc/orderings.hpp"
#include "ordcalc/quadrature_rules.hpp"

namespace ordcalc {

/* One-mode squeeze operator S = exp[(r/2)(a^2 - adag^2)], the unitary with
 *   S^dag q S = exp(-r) q,   S^dag p S = exp(+r) p.
 * Parametrized equivalently by the scale factor mu = exp(r); the bilinear
 * routes below additionally use kappa = 1 - 1/mu (finite for mu > 0, inside
 * the series' unit disc exactly when mu > 1/2).
 */
struct SqueezeParams {
  double r;
  double mu;
  double kappa;

  static SqueezeParams from_r(double r) {
    if (!std::isfinite(r))
      throw std::invalid_argument("SqueezeParams: r must be finite");
    const double mu = std::exp(r);
    return {r, mu, 1.0 - 1.0 / mu};
  }

  static SqueezeParams from_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw std::invalid_argument("SqueezeParams: mu must be positive");
    return {std::log(mu), mu, 1.0 - 1.0 / mu};
  }
};

/// Generator (r/2)(a^2 - adag^2) in the truncated number basis.
inline TruncatedOperator squeeze_generator(const SqueezeParams& sp,
                                           const FockConfig& cfg) {
  auto [a, adag] = ladder_ops(cfg);
  return (0.5 * sp.r) * (a * a - adag * adag);
}

/// Route 1: direct exponential of the generator.
inline TruncatedOperator squeeze_exact(const SqueezeParams& sp,
                                       const FockConfig& cfg) {
  return matrix_exp(squeeze_generator(sp, cfg));
}

/// Route 2: the same unitary through the quadrature anticommutator,
/// S = exp[(i r / 2)(q p + p q)], assembled from q and p matrices instead of
/// ladder monomials.
inline TruncatedOperator squeeze_qp(const SqueezeParams& sp,
                                    const FockConfig& cfg) {
  auto [q, p] = quadrature_ops(cfg);
  return matrix_exp((kImag * (0.5 * sp.r)) * (q * p + p * q));
}

/// Route 3: exact matrix elements from the position representation.  S acts
/// on wavefunctions as (S psi)(x) = sqrt(mu) psi(mu x), so
///   <m|S|n> = mu^{-1/2} Int dx psi_m(x/mu) psi_n(x)
///           = (sigma/sqrt(mu)) Sum_i W_i psi_m(sigma t_i / mu)
///                                      psi_n(sigma t_i),
/// sigma^2 = 2 / (1 + mu^{-2}) chosen so the integrand is exactly
/// polynomial * exp(-t^2); Gauss-Hermite with enough points is then exact.
/// A doubled-rule comparison guards against an under-resolved explicit
/// point count.
inline TruncatedOperator squeeze_position_integral(const SqueezeParams& sp,
                                                   const FockConfig& cfg,
                                                   int points = 0) {
  const auto n = static_cast<Eigen::Index>(cfg.truncation);
  if (points <= 0) points = static_cast<int>(cfg.truncation) + 8;
  const double sigma = std::sqrt(2.0 / (1.0 + 1.0 / (sp.mu * sp.mu)));

  const auto evaluate = [&](int pts) {
    const QuadratureRule rule = gauss_hermite_total(pts);
    Matrix out = Matrix::Zero(n, n);
    std::vector<double> left, right;
    for (int i = 0; i < pts; ++i) {
      const double t = rule.nodes[i];
      detail::hermite_sequence(static_cast<int>(cfg.truncation) - 1,
                               sigma * t / sp.mu, left);
      detail::hermite_sequence(static_cast<int>(cfg.truncation) - 1, sigma * t,
                               right);
      const Eigen::Map<const Eigen::VectorXd> lv(left.data(), n);
      const Eigen::Map<const Eigen::VectorXd> rv(right.data(), n);
      out += (rule.weights[i] * sigma / std::sqrt(sp.mu)) *
             (lv * rv.transpose()).cast<Complex>();
    }
    return out;
  };

  Matrix coarse = evaluate(points);
  Matrix fine = evaluate(2 * points);
  const double drift = (coarse - fine)
                           .topLeftCorner(static_cast<Eigen::Index>(
                                              cfg.trusted_block),
                                          static_cast<Eigen::Index>(
                                              cfg.trusted_block))
                           .cwiseAbs()
                           .maxCoeff();
  if (!(drift <= 1e-12))
    throw VerificationFailure("squeeze_position_integral under-resolved",
                              drift, 1e-12);
  return {std::move(fine), cfg.trusted_block};
}

/// Route 4: scaled pq-ordered bilinear series,
///   S = mu^{-1/2} PQ exp(i kappa p q),  kappa = 1 - 1/mu,
/// valid for |kappa| < 1 i.e. mu > 1/2.
inline TruncatedOperator squeeze_pq_ordered(const SqueezeParams& sp,
                                            const FockConfig& cfg) {
  return (1.0 / std::sqrt(sp.mu)) * ordered_exp_pq_bilinear(sp.kappa, cfg);
}

/* Route 5: resolve the bilinear series over the complex plane and reorder
 * every factor to normal form before integrating:
 *
 *   S = mu^{-1/2} Int d^2z w(z) exp(izp) exp(s conj(z) q)
 *     = mu^{-1/2} Int d^2z w(z) e^{C(z)} exp(l+ adag) exp(l- a),
 *
 * s = sign(kappa), w the UnravelKernel weight, and (with z = x + iy)
 *   C(z) = -i x y + (s/2)|z|^2,
 *   l+ = (s conj(z) - z)/sqrt2,   l- = (s conj(z) + z)/sqrt2,
 * so l+ depends on one real axis only and l- on the other.  Each triangular
 * factor exp(l adag) / exp(l a) has closed-form entries, the scalar decay is
 * exp(-(1/|kappa| - s/2)|z|^2), and after scaling that to exp(-u^2-v^2) the
 * double sum restructures as
 *   Sum_j E+(node_j) [ Sum_i scalar_ij E-(node_i) ],
 * one matrix product per outer node.  Node order is fixed: deterministic.
 */
inline TruncatedOperator squeeze_unraveled(const SqueezeParams& sp,
                                           const FockConfig& cfg,
                                           int points = 60) {
  if (sp.kappa == 0.0) return TruncatedOperator::identity(cfg);
  const UnravelKernel kernel(sp.kappa);
  const int s = kernel.sign();
  const double abs_kappa = std::abs(sp.kappa);
  const auto n = static_cast<Eigen::Index>(cfg.truncation);

  // exp(l adag): lower triangular, entry (m+k, m) = l^k sqrt((m+k)!/m!) / k!.
  const auto raising_factor = [&](Complex l) {
    Matrix e = Matrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      Complex entry(1.0);
      e(col, col) = entry;
      for (Eigen::Index row = col + 1; row < n; ++row) {
        const auto k = static_cast<double>(row - col);
        entry *= l * std::sqrt(static_cast<double>(row)) / k;
        e(row, col) = entry;
      }
    }
    return e;
  };

  const QuadratureRule rule = gauss_hermite_total(points);
  const double c2 = 1.0 / (1.0 / abs_kappa - 0.5 * s);  // scale^2
  const double c = std::sqrt(c2);
  const double sqrt2c = std::sqrt(2.0) * c;

  // l- lives on the inner axis, l+ on the outer one (axes swap with s).
  const auto lambda_minus = [&](double t) {
    return s == +1 ? Complex(sqrt2c * t, 0.0) : Complex(0.0, sqrt2c * t);
  };
  const auto lambda_plus = [&](double t) {
    return s == +1 ? Complex(0.0, -sqrt2c * t) : Complex(-sqrt2c * t, 0.0);
  };

  std::vector<Matrix> lowering;  // exp(l-(t_i) a) = raising(conj l)^adjoint
  lowering.reserve(points);
  for (int i = 0; i < points; ++i)
    lowering.push_back(
        raising_factor(std::conj(lambda_minus(rule.nodes[i]))).adjoint());

  const double measure =
      c2 / (std::numbers::pi * abs_kappa * std::sqrt(sp.mu));
  Matrix total = Matrix::Zero(n, n);
  Matrix inner(n, n);
  for (int j = 0; j < points; ++j) {
    const double tj = rule.nodes[j];
    inner.setZero();
    for (int i = 0; i < points; ++i) {
      const double ti = rule.nodes[i];
      const Complex scalar =
          measure * rule.weights[i] * rule.weights[j] *
          std::exp(Complex(-ti * ti - tj * tj, -c2 * ti * tj));
      inner.noalias() += scalar * lowering[static_cast<std::size_t>(i)];
    }
    total.noalias() += raising_factor(lambda_plus(tj)) * inner;
  }
  return {std::move(total), cfg.trusted_block};
}

/// Scaling action residuals of the exact route: S^dag q S vs exp(-r) q,
/// S^dag p S vs exp(+r) p, and preservation of [q, p] = i under conjugation.
struct SqueezeActionCheck {
  double q_residual;
  double p_residual;
  double commutator_residual;
};

inline SqueezeActionCheck verify_squeeze_action(const SqueezeParams& sp,
                                                const FockConfig& cfg) {
  const TruncatedOperator s = squeeze_exact(sp, cfg);
  const TruncatedOperator sd = s.adjoint();
  auto [q, p] = quadrature_ops(cfg);
  const TruncatedOperator a = sd * q * s;
  const TruncatedOperator b = sd * p * s;
  SqueezeActionCheck out;
  out.q_residual = a.trusted_distance(std::exp(-sp.r) * q);
  out.p_residual = b.trusted_distance(std::exp(sp.r) * p);
  out.commutator_residual =
      (a * b - b * a).trusted_distance(kImag * TruncatedOperator::identity(cfg));
  return out;
}

/// Central-difference check of dS/dmu = (i / 2 mu)(q p + p q) S, also in the
/// equivalent product form dS/dmu = [-1/(2 mu) + (i/mu) p q] S.
struct OdeResidualPair {
  double product_form;
  double anticommutator_form;
};

inline OdeResidualPair squeeze_ode_residual(const SqueezeParams& sp,
                                            const FockConfig& cfg,
                                            double dmu) {
  if (!(dmu > 0.0) || !(sp.mu - dmu > 0.0))
    throw std::invalid_argument(
        "squeeze_ode_residual: need 0 < dmu < mu");
  if (dmu < 64.0 * std::numeric_limits<double>::epsilon() * sp.mu)
    throw std::invalid_argument(
        "squeeze_ode_residual: step below the rounding floor of the central "
        "difference");
  const TruncatedOperator plus =
      squeeze_exact(SqueezeParams::from_mu(sp.mu + dmu), cfg);
  const TruncatedOperator minus =
      squeeze_exact(SqueezeParams::from_mu(sp.mu - dmu), cfg);
  const TruncatedOperator fd = (1.0 / (2.0 * dmu)) * (plus - minus);

  const TruncatedOperator s = squeeze_exact(sp, cfg);
  auto [q, p] = quadrature_ops(cfg);
  const TruncatedOperator rhs_product =
      (-1.0 / (2.0 * sp.mu)) * s + (kImag * (1.0 / sp.mu)) * (p * q * s);
  const TruncatedOperator rhs_anti =
      (kImag * (0.5 / sp.mu)) * ((q * p + p * q) * s);
  return {fd.trusted_distance(rhs_product), fd.trusted_distance(rhs_anti)};
}

/* Normal-ordered closed form.  Inside the normal-ordering symbol,
 *   S = prefactor * N exp[ c_sq (q^2 + p^2) + c_pq q p ],
 * and translating the symbol to ladder variables gives the factored operator
 *   S = prefactor * exp(c_ad2 adag^2) (1 + c_n)^{adag a} exp(c_a2 a^2).
 */
struct NormalOrderedSqueeze {
  Complex prefactor;
  Complex c_sq;   // coefficient of q^2 + p^2 inside the symbol
  Complex c_pq;   // coefficient of q p inside the symbol
  Complex c_ad2;  // = (i/2) c_pq
  Complex c_a2;   // = -(i/2) c_pq
  Complex c_n;    // = 2 c_sq
};

namespace detail {

inline NormalOrderedSqueeze ladder_from_symbol(Complex prefactor, Complex c_sq,
                                               Complex c_pq) {
  NormalOrderedSqueeze out;
  out.prefactor = prefactor;
  out.c_sq = c_sq;
  out.c_pq = c_pq;
  // Inside the symbol q^2 + p^2 = 2 adag a and q p = (i/2)(adag^2 - a^2).
  out.c_ad2 = 0.5 * kImag * c_pq;
  out.c_a2 = -0.5 * kImag * c_pq;
  out.c_n = 2.0 * c_sq;
  return out;
}

}  // namespace detail

/// Route (a): hyperbolic closed forms in mu = exp(r).
inline NormalOrderedSqueeze normal_squeeze_direct(const SqueezeParams& sp) {
  const double mu2 = sp.mu * sp.mu;
  const Complex prefactor(std::sqrt(2.0 * sp.mu / (1.0 + mu2)));
  const Complex c_pq(0.0, (mu2 - 1.0) / (1.0 + mu2));
  const Complex c_sq(-0.5 * (sp.mu - 1.0) * (sp.mu - 1.0) / (1.0 + mu2));
  return detail::ladder_from_symbol(prefactor, c_sq, c_pq);
}

/// Route (b): resum the plane-resolved form of squeeze_unraveled with the
/// shared Gaussian normalizer.  The z-integral of
///   w(z) e^{C(z)} exp(s conj(z) q + i z p)      (q, p symbols)
/// is the Gaussian integral {zeta = s/2 - 1/|kappa|, f = -1/4, g = 1/4}
/// with sources xi = i p, eta = s q, up to the measure factor 1/|kappa|.
inline NormalOrderedSqueeze normal_squeeze_from_integral(
    const SqueezeParams& sp) {
  if (sp.kappa == 0.0)
    throw std::invalid_argument(
        "normal_squeeze_from_integral: mu = 1 has no plane resolution");
  const UnravelKernel kernel(sp.kappa);
  const double s = kernel.sign();
  const double abs_kappa = std::abs(sp.kappa);
  const GaussianNormalForm nf = gaussian_normal_form(
      Complex(0.5 * s - 1.0 / abs_kappa), Complex(-0.25), Complex(0.25));
  // xi^2 -> -p^2, eta^2 -> q^2, xi eta -> i s q p; equal quadratic weights
  // because c_xi2 = -c_eta2 for this f, g.
  const Complex prefactor = nf.norm / (abs_kappa * std::sqrt(sp.mu));
  const Complex c_sq = nf.c_eta2;
  const Complex c_pq = kImag * s * nf.c_xi_eta;
  return detail::ladder_from_symbol(prefactor, c_sq, c_pq);
}

/// Everyday entry point: route (a), cross-checked against route (b) away
/// from mu = 1.
inline NormalOrderedSqueeze normal_squeeze_coefficients(
    const SqueezeParams& sp, double agreement_tolerance = 1e-12) {
  const NormalOrderedSqueeze direct = normal_squeeze_direct(sp);
  if (sp.kappa != 0.0) {
    const NormalOrderedSqueeze integral = normal_squeeze_from_integral(sp);
    const double gap = std::max(
        {std::abs(direct.prefactor - integral.prefactor),
         std::abs(direct.c_sq - integral.c_sq),
         std::abs(direct.c_pq - integral.c_pq)});
    if (!(gap <= agreement_tolerance))
      throw VerificationFailure(
          "normal_squeeze_coefficients: derivation routes disagree", gap,
          agreement_tolerance);
  }
  return direct;
}

/// Factored normal-ordered matrix.  All three factors are triangular or
/// diagonal with exact truncated entries, so this route has no truncation
/// leakage of its own.
inline TruncatedOperator squeeze_normal_factored(const SqueezeParams& sp,
                                                 const FockConfig& cfg) {
  const NormalOrderedSqueeze co = normal_squeeze_coefficients(sp);
  auto [a, adag] = ladder_ops(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.truncation);
  Matrix diag = Matrix::Zero(n, n);
  const Complex base = Complex(1.0) + co.c_n;
  for (Eigen::Index k = 0; k < n; ++k)
    diag(k, k) = std::pow(base, static_cast<double>(k));
  const TruncatedOperator number_factor(std::move(diag), cfg.trusted_block);
  return co.prefactor * (matrix_exp(co.c_ad2 * (adag * adag)) *
                         number_factor *
                         matrix_exp(co.c_a2 * (a * a)));
}

}  // namespace ordcalc
