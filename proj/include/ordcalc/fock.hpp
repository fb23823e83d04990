#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ordcalc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kImag{0.0, 1.0};

/* Truncation parameters for the finite Fock-space representation.
 *
 * `truncation` is the matrix dimension N.  `trusted_block` is the leading
 * M x M block on which operators are compared: truncation artifacts pile up
 * near the edge of the matrix (the commutator [a, a^dag] is wrong in the
 * last diagonal entry, and series/quadrature constructions accumulate large
 * cancellation errors there), so only the leading block carries meaning.
 */
struct FockConfig {
  std::size_t truncation;
  std::size_t trusted_block;
  double tolerance;

  explicit FockConfig(std::size_t n, std::size_t m = 0, double tol = 1e-9)
      : truncation(n),
        trusted_block(m == 0 ? std::max<std::size_t>(1, n / 3) : m),
        tolerance(tol) {
    if (truncation < 2)
      throw std::invalid_argument("FockConfig: truncation must be at least 2");
    if (trusted_block < 1 || trusted_block > truncation)
      throw std::invalid_argument(
          "FockConfig: trusted_block must lie in [1, truncation]");
    if (!(tolerance > 0.0))
      throw std::invalid_argument("FockConfig: tolerance must be positive");
  }
};

/* Dense complex matrix tagged with the size of its trusted block.
 *
 * Arithmetic propagates the smaller trusted block of the operands; all
 * comparisons used by the verification checks go through trusted_distance.
 */
class TruncatedOperator {
 public:
  TruncatedOperator(Matrix m, std::size_t trusted)
      : mat_(std::move(m)), trusted_(trusted) {
    if (mat_.rows() != mat_.cols())
      throw std::invalid_argument("TruncatedOperator: matrix must be square");
    if (mat_.rows() < 2)
      throw std::invalid_argument("TruncatedOperator: dimension must be >= 2");
    if (trusted_ < 1 || trusted_ > static_cast<std::size_t>(mat_.rows()))
      throw std::invalid_argument("TruncatedOperator: bad trusted block");
  }

  static TruncatedOperator identity(const FockConfig& cfg) {
    return {Matrix::Identity(static_cast<Eigen::Index>(cfg.truncation),
                             static_cast<Eigen::Index>(cfg.truncation)),
            cfg.trusted_block};
  }

  static TruncatedOperator zero(const FockConfig& cfg) {
    return {Matrix::Zero(static_cast<Eigen::Index>(cfg.truncation),
                         static_cast<Eigen::Index>(cfg.truncation)),
            cfg.trusted_block};
  }

  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  std::size_t trusted_block() const { return trusted_; }
  const Matrix& matrix() const { return mat_; }

  Complex operator()(std::size_t i, std::size_t j) const {
    return mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  TruncatedOperator adjoint() const { return {mat_.adjoint(), trusted_}; }

  /// Largest |entry| over the trusted block.
  double trusted_norm() const {
    auto m = static_cast<Eigen::Index>(trusted_);
    return mat_.topLeftCorner(m, m).cwiseAbs().maxCoeff();
  }

  /// Largest |entry| of (*this - other) over the common trusted block.
  double trusted_distance(const TruncatedOperator& other) const {
    if (dim() != other.dim())
      throw std::invalid_argument("trusted_distance: dimension mismatch");
    auto m = static_cast<Eigen::Index>(std::min(trusted_, other.trusted_));
    return (mat_.topLeftCorner(m, m) - other.mat_.topLeftCorner(m, m))
        .cwiseAbs()
        .maxCoeff();
  }

  friend TruncatedOperator operator*(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    check_dims(a, b, "operator*");
    return {a.mat_ * b.mat_, std::min(a.trusted_, b.trusted_)};
  }

  friend TruncatedOperator operator+(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    check_dims(a, b, "operator+");
    return {a.mat_ + b.mat_, std::min(a.trusted_, b.trusted_)};
  }

  friend TruncatedOperator operator-(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    check_dims(a, b, "operator-");
    return {a.mat_ - b.mat_, std::min(a.trusted_, b.trusted_)};
  }

  friend TruncatedOperator operator*(Complex c, const TruncatedOperator& a) {
    return {c * a.mat_, a.trusted_};
  }

  friend TruncatedOperator operator*(double c, const TruncatedOperator& a) {
    return {c * a.mat_, a.trusted_};
  }

 private:
  static void check_dims(const TruncatedOperator& a, const TruncatedOperator& b,
                         const char* who) {
    if (a.dim() != b.dim())
      throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }

  Matrix mat_;
  std::size_t trusted_;
};

/// Thrown by matrix_exp when scaling or the Taylor stage fails to converge.
struct ExponentialNonConvergence : std::runtime_error {
  ExponentialNonConvergence(double norm_, int depth_)
      : std::runtime_error("matrix_exp did not converge (input norm " +
                           std::to_string(norm_) + ", scaling depth " +
                           std::to_string(depth_) + ")"),
        norm(norm_),
        scaling_depth(depth_) {}
  double norm;
  int scaling_depth;
};

/// Annihilation and creation matrices (a, a^dag) at the configured truncation.
/// a has sqrt(1), sqrt(2), ... on the superdiagonal; a^dag is its transpose.
inline std::pair<TruncatedOperator, TruncatedOperator> ladder_ops(
    const FockConfig& cfg) {
  auto n = static_cast<Eigen::Index>(cfg.truncation);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  Matrix adag = a.adjoint();
  return {TruncatedOperator(std::move(a), cfg.trusted_block),
          TruncatedOperator(std::move(adag), cfg.trusted_block)};
}

/// Quadrature pair (q, p) with q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
/// so that [q, p] = i holds exactly away from the truncation edge (hbar = 1).
inline std::pair<TruncatedOperator, TruncatedOperator> quadrature_ops(
    const FockConfig& cfg) {
  auto [a, adag] = ladder_ops(cfg);
  const double s = 1.0 / std::sqrt(2.0);
  TruncatedOperator q = s * (a + adag);
  TruncatedOperator p = (Complex(0.0, -s)) * (a - adag);
  return {std::move(q), std::move(p)};
}

namespace detail {

/* Scaling-and-squaring exponential: halve the matrix until its infinity norm
 * drops below 1/2, sum the Taylor series to machine precision (the scaled
 * series terms shrink at least geometrically, so ~40 terms always suffice),
 * then square the result back.  Squaring depth is capped so a wild input
 * reports itself instead of looping.
 */
inline Matrix exp_dense(const Matrix& a) {
  if (!a.allFinite())
    throw std::invalid_argument("matrix_exp: non-finite entries in input");
  const Eigen::Index n = a.rows();
  const double norm0 = a.cwiseAbs().rowwise().sum().maxCoeff();

  int squarings = 0;
  double norm = norm0;
  while (norm > 0.5) {
    ++squarings;
    norm *= 0.5;
    if (squarings > 60) throw ExponentialNonConvergence(norm0, squarings);
  }
  const double scale = std::ldexp(1.0, -squarings);

  Matrix x = scale * a;
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = Matrix::Identity(n, n);
  constexpr int kMaxTerms = 128;
  int k = 1;
  for (; k <= kMaxTerms; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-17 * std::max(1.0, sum.norm())) break;
  }
  if (k > kMaxTerms) throw ExponentialNonConvergence(norm0, squarings);

  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace detail

inline TruncatedOperator matrix_exp(const TruncatedOperator& a) {
  return {detail::exp_dense(a.matrix()), a.trusted_block()};
}

}  // namespace ordcalc
