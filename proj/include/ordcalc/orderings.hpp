#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordcalc/fock.hpp"
#include "ordcalc/polynomial.hpp"

namespace ordcalc {

/* An operator ordering is defined operationally by where it sends the three
 * second moments: the ordered images of q^2, p^2 and of the mixed product
 * (q p and p q collapse to the same image, since operators commute inside an
 * ordering symbol).  Everything downstream (ordered squares, reordering
 * scalars) is derived from this table, not from per-ordering special cases.
 */
struct MomentTable {
  NormalPolynomial q_squared;
  NormalPolynomial p_squared;
  NormalPolynomial mixed;  // image of q p (equivalently of p q)
};

namespace detail {

// Operator identities used to assemble the built-in tables:
//   q^2        = 1/2 a^2 + 1/2 adag^2 + adag a + 1/2
//   p^2        = -1/2 a^2 - 1/2 adag^2 + adag a + 1/2
//   1/2{q,p}   = (i/2)(adag^2 - a^2)
//   q p        = 1/2{q,p} + i/2,   p q = 1/2{q,p} - i/2
// Built directly with half-integer coefficients (exactly representable)
// rather than by multiplying out q and p, whose 1/sqrt(2) factors would
// leave one-ulp residue on every entry.
inline NormalPolynomial q_squared_op() {
  return NormalPolynomial::monomial(2, 0, 0.5) +
         NormalPolynomial::monomial(0, 2, 0.5) +
         NormalPolynomial::monomial(1, 1, 1.0) + NormalPolynomial(Complex(0.5));
}
inline NormalPolynomial p_squared_op() {
  return NormalPolynomial::monomial(2, 0, -0.5) +
         NormalPolynomial::monomial(0, 2, -0.5) +
         NormalPolynomial::monomial(1, 1, 1.0) + NormalPolynomial(Complex(0.5));
}
inline NormalPolynomial sym_qp_op() {
  return NormalPolynomial::monomial(2, 0, Complex(0.0, 0.5)) +
         NormalPolynomial::monomial(0, 2, Complex(0.0, -0.5));
}

}  // namespace detail

class OrderingKind {
 public:
  enum class Tag { PQ, QP, Normal, Antinormal, Custom };

  static OrderingKind pq() { return OrderingKind(Tag::PQ); }
  static OrderingKind qp() { return OrderingKind(Tag::QP); }
  static OrderingKind normal() { return OrderingKind(Tag::Normal); }
  static OrderingKind antinormal() { return OrderingKind(Tag::Antinormal); }

  /// Custom orderings may only shift the second moments by c-numbers, which
  /// is exactly the condition for reordering scalars to stay scalar.
  static OrderingKind custom(MomentTable table) {
    OrderingKind normal_kind = normal();
    const MomentTable& base = normal_kind.moment_table();
    auto scalar_shift = [](const NormalPolynomial& a, const NormalPolynomial& b) {
      return (a - b).is_scalar();
    };
    if (!scalar_shift(table.q_squared, base.q_squared) ||
        !scalar_shift(table.p_squared, base.p_squared) ||
        !scalar_shift(table.mixed, base.mixed))
      throw std::invalid_argument(
          "OrderingKind::custom: moment table must differ from the normal "
          "ordering by scalars only");
    OrderingKind kind(Tag::Custom);
    kind.custom_table_ = std::move(table);
    return kind;
  }

  Tag tag() const { return tag_; }

  bool matrix_realizable() const { return tag_ != Tag::Custom; }

  std::string name() const {
    switch (tag_) {
      case Tag::PQ: return "pq";
      case Tag::QP: return "qp";
      case Tag::Normal: return "normal";
      case Tag::Antinormal: return "antinormal";
      case Tag::Custom: return "custom";
    }
    return "?";
  }

  /// For built-in orderings the returned reference has static storage
  /// duration, so `OrderingKind::pq().moment_table()` is safe to bind to a
  /// reference.  For custom orderings it lives as long as this object.
  const MomentTable& moment_table() const {
    if (tag_ == Tag::Custom) return *custom_table_;
    return builtin_table(tag_);
  }

 private:
  explicit OrderingKind(Tag t) : tag_(t) {}

  static const MomentTable& builtin_table(Tag tag) {
    static const MomentTable pq_table = build_builtin(Tag::PQ);
    static const MomentTable qp_table = build_builtin(Tag::QP);
    static const MomentTable normal_table = build_builtin(Tag::Normal);
    static const MomentTable antinormal_table = build_builtin(Tag::Antinormal);
    switch (tag) {
      case Tag::PQ: return pq_table;
      case Tag::QP: return qp_table;
      case Tag::Normal: return normal_table;
      case Tag::Antinormal: return antinormal_table;
      case Tag::Custom: break;
    }
    throw std::logic_error("builtin_table: custom tag has no built-in table");
  }

  static MomentTable build_builtin(Tag tag) {
    using detail::p_squared_op;
    using detail::q_squared_op;
    using detail::sym_qp_op;
    const NormalPolynomial half(Complex(0.5));
    const NormalPolynomial half_i(Complex(0.0, 0.5));
    switch (tag) {
      case Tag::Normal:
        // N q^2 = q^2 - 1/2, N p^2 = p^2 - 1/2, N qp = 1/2{q,p}
        return {q_squared_op() - half, p_squared_op() - half, sym_qp_op()};
      case Tag::PQ:
        // second moments of q^2, p^2 untouched; qp and pq both go to pq
        return {q_squared_op(), p_squared_op(), sym_qp_op() - half_i};
      case Tag::QP:
        return {q_squared_op(), p_squared_op(), sym_qp_op() + half_i};
      case Tag::Antinormal:
        return {q_squared_op() + half, p_squared_op() + half, sym_qp_op()};
      case Tag::Custom: break;
    }
    throw std::logic_error("build_builtin: custom tag has no built-in table");
  }

  Tag tag_;
  std::optional<MomentTable> custom_table_;
};

/* Ordered image of X^2 for X = alpha q + beta p.  Expanding inside the
 * ordering symbol (where q and p commute):
 *     O X^2 = alpha^2 (O q^2) + beta^2 (O p^2) + 2 alpha beta (O qp).
 */
inline NormalPolynomial ordered_square(const OrderingKind& ordering,
                                       const LinearForm& x) {
  const MomentTable& t = ordering.moment_table();
  return (x.alpha * x.alpha) * t.q_squared + (x.beta * x.beta) * t.p_squared +
         (2.0 * x.alpha * x.beta) * t.mixed;
}

/* Matrix realization of O exp(X) for X = alpha q + beta p.  Each built-in
 * ordering factors the exponential series exactly:
 *     PQ -> exp(beta p) exp(alpha q)          (p factors leftmost)
 *     QP -> exp(alpha q) exp(beta p)
 *     N  -> exp(l+ adag) exp(l- a)
 *     A  -> exp(l- a) exp(l+ adag)
 */
inline TruncatedOperator ordered_exp_linear(const OrderingKind& ordering,
                                            const LinearForm& x,
                                            const FockConfig& cfg) {
  if (!ordering.matrix_realizable())
    throw std::invalid_argument(
        "ordered_exp_linear: custom orderings have no factored matrix form");
  switch (ordering.tag()) {
    case OrderingKind::Tag::PQ: {
      auto [q, p] = quadrature_ops(cfg);
      return matrix_exp(x.beta * p) * matrix_exp(x.alpha * q);
    }
    case OrderingKind::Tag::QP: {
      auto [q, p] = quadrature_ops(cfg);
      return matrix_exp(x.alpha * q) * matrix_exp(x.beta * p);
    }
    case OrderingKind::Tag::Normal: {
      auto [a, adag] = ladder_ops(cfg);
      return matrix_exp(x.ladder_plus() * adag) *
             matrix_exp(x.ladder_minus() * a);
    }
    case OrderingKind::Tag::Antinormal: {
      auto [a, adag] = ladder_ops(cfg);
      return matrix_exp(x.ladder_minus() * a) *
             matrix_exp(x.ladder_plus() * adag);
    }
    case OrderingKind::Tag::Custom: break;
  }
  throw std::logic_error("ordered_exp_linear: unreachable");
}

/// Thrown when the bilinear series fails to settle below the requested
/// threshold; carries the trailing partial-term norms for diagnosis.
struct SeriesNonConvergence : std::runtime_error {
  SeriesNonConvergence(std::string what_, std::vector<double> trailing)
      : std::runtime_error(std::move(what_)),
        trailing_term_norms(std::move(trailing)) {}
  std::vector<double> trailing_term_norms;
};

/* PQ-ordered exponential of the bilinear i kappa p q:
 *     sum_n (i kappa)^n p^n q^n / n!
 * summed on the full matrix.  Trusted-block contributions of the terms decay
 * geometrically like |kappa|^n (|kappa| < 1 required), while entries near
 * the truncation edge are meaningless; the stopping rule therefore watches
 * the trusted block only, ending once two consecutive terms each contribute
 * less than tolerance/10 there.
 */
inline TruncatedOperator ordered_exp_pq_bilinear(double kappa,
                                                 const FockConfig& cfg) {
  if (!(std::abs(kappa) < 1.0))
    throw std::invalid_argument(
        "ordered_exp_pq_bilinear: series requires |kappa| < 1");
  if (kappa == 0.0) return TruncatedOperator::identity(cfg);
  auto [q, p] = quadrature_ops(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.truncation);
  const auto m = static_cast<Eigen::Index>(cfg.trusted_block);
  Matrix sum = Matrix::Identity(n, n);
  Matrix p_pow = Matrix::Identity(n, n);
  Matrix q_pow = Matrix::Identity(n, n);
  Complex coeff(1.0);
  const double threshold = cfg.tolerance / 10.0;
  constexpr int kMaxTerms = 400;
  double prev_contrib = std::numeric_limits<double>::infinity();
  std::vector<double> trailing;
  for (int k = 1; k <= kMaxTerms; ++k) {
    p_pow *= p.matrix();
    q_pow *= q.matrix();
    coeff *= Complex(0.0, kappa) / static_cast<double>(k);
    // Once kappa^k/k! underflows, later terms are numerically zero whatever
    // their true size; a threshold below that cannot be certified.
    if (std::abs(coeff) == 0.0) break;
    Matrix term = coeff * (p_pow * q_pow);
    sum += term;
    const double contrib = term.topLeftCorner(m, m).cwiseAbs().maxCoeff();
    trailing.push_back(contrib);
    if (contrib < threshold && prev_contrib < threshold)
      return {std::move(sum), cfg.trusted_block};
    prev_contrib = contrib;
    // The full-matrix powers grow without bound even though the trusted
    // block converges; give up before they overflow.
    if (!std::isfinite(contrib) || !p_pow.allFinite()) break;
  }
  if (trailing.size() > 8) trailing.erase(trailing.begin(), trailing.end() - 8);
  throw SeriesNonConvergence(
      "ordered_exp_pq_bilinear: series did not settle within " +
          std::to_string(kMaxTerms) + " terms",
      std::move(trailing));
}

}  // namespace ordcalc
