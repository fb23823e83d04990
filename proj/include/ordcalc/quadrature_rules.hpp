#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ordcalc/hermite.hpp"

namespace ordcalc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the orthogonal family, weights come from the first eigenvector
// components scaled by the total weight-function mass.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& subdiag, double mass) {
  const Eigen::Index n = subdiag.size() + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("golub_welsch: eigensolver failed");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: points < 1");
  Eigen::VectorXd sub(points - 1);
  for (int k = 1; k < points; ++k)
    sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return detail::golub_welsch(sub, 2.0);
}

/// Gauss-Legendre rule mapped affinely onto [a, b].
inline QuadratureRule gauss_legendre(int points, double a, double b) {
  QuadratureRule rule = gauss_legendre(points);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (auto& x : rule.nodes) x = mid + half * x;
  for (auto& w : rule.weights) w *= half;
  return rule;
}

/* Gauss-Hermite rule in "total weight" form: returns nodes x_i of H_P and
 * weights W_i = w_i e^{x_i^2}, so that
 *     integral f(x) dx  ~=  sum_i W_i f(x_i)
 * for integrands f that already contain their own e^{-x^2} decay.  The
 * exponentially large factor is never formed: W_i = 1 / (P psi_{P-1}(x_i)^2)
 * in terms of the orthonormal oscillator eigenfunctions, which are O(1) at
 * the nodes.
 */
inline QuadratureRule gauss_hermite_total(int points) {
  if (points < 1) throw std::invalid_argument("gauss_hermite_total: points < 1");
  Eigen::VectorXd sub(points - 1);
  for (int k = 1; k < points; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  QuadratureRule rule = detail::golub_welsch(sub, std::sqrt(M_PI));
  std::vector<double> seq;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    detail::hermite_sequence(points - 1, rule.nodes[i], seq);
    const double psi = seq[static_cast<std::size_t>(points - 1)];
    rule.weights[i] = 1.0 / (points * psi * psi);
  }
  return rule;
}

}  // namespace ordcalc
