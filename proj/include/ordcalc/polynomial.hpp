#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ordcalc/fock.hpp"

namespace ordcalc {

/* Polynomial in the ladder operators held in normal order: a map from
 * (m, n) to the coefficient of a^dag^m a^n.  The canonical form is unique,
 * so equality of operators reduces to equality of coefficient maps.
 *
 * Products are reduced with a a^dag = a^dag a + 1, which for whole monomials
 * gives  a^n a^dag^m = sum_k k! C(n,k) C(m,k) a^dag^(m-k) a^(n-k).
 */
class NormalPolynomial {
 public:
  using Key = std::pair<std::uint32_t, std::uint32_t>;  // (dagger power, power)

  NormalPolynomial() = default;

  explicit NormalPolynomial(Complex scalar) {
    if (scalar != Complex(0.0)) terms_[{0, 0}] = scalar;
  }

  static NormalPolynomial monomial(std::uint32_t m, std::uint32_t n,
                                   Complex coeff) {
    NormalPolynomial p;
    if (coeff != Complex(0.0)) p.terms_[{m, n}] = coeff;
    return p;
  }

  /// q = (a + a^dag)/sqrt(2)
  static NormalPolynomial position() {
    const double s = 1.0 / std::sqrt(2.0);
    NormalPolynomial p;
    p.terms_[{1, 0}] = s;
    p.terms_[{0, 1}] = s;
    return p;
  }

  /// p = (a - a^dag)/(i sqrt(2))
  static NormalPolynomial momentum() {
    const Complex c = Complex(0.0, -1.0) / std::sqrt(2.0);
    NormalPolynomial p;
    p.terms_[{1, 0}] = -c;
    p.terms_[{0, 1}] = c;
    return p;
  }

  const std::map<Key, Complex>& terms() const { return terms_; }

  bool empty() const { return terms_.empty(); }

  Complex coefficient(std::uint32_t m, std::uint32_t n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  /// Coefficient of the identity monomial.
  Complex scalar_part() const { return coefficient(0, 0); }

  /// True when every non-constant coefficient vanishes (up to rounding in
  /// the last ~2 digits relative to the largest coefficient present).
  bool is_scalar() const {
    const double scale = max_abs_coefficient();
    for (const auto& [key, c] : terms_) {
      if (key.first == 0 && key.second == 0) continue;
      if (std::abs(c) > 1e-14 * std::max(1.0, scale)) return false;
    }
    return true;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  NormalPolynomial adjoint() const {
    NormalPolynomial out;
    for (const auto& [key, c] : terms_)
      out.terms_[{key.second, key.first}] = std::conj(c);
    return out;
  }

  NormalPolynomial& operator+=(const NormalPolynomial& other) {
    for (const auto& [key, c] : other.terms_) add_term(key, c);
    return *this;
  }

  NormalPolynomial& operator-=(const NormalPolynomial& other) {
    for (const auto& [key, c] : other.terms_) add_term(key, -c);
    return *this;
  }

  friend NormalPolynomial operator+(NormalPolynomial a,
                                    const NormalPolynomial& b) {
    a += b;
    return a;
  }

  friend NormalPolynomial operator-(NormalPolynomial a,
                                    const NormalPolynomial& b) {
    a -= b;
    return a;
  }

  friend NormalPolynomial operator*(Complex s, const NormalPolynomial& a) {
    NormalPolynomial out;
    if (s == Complex(0.0)) return out;
    for (const auto& [key, c] : a.terms_) out.terms_[key] = s * c;
    return out;
  }

  friend NormalPolynomial operator*(const NormalPolynomial& a,
                                    const NormalPolynomial& b) {
    NormalPolynomial out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        out.accumulate_monomial_product(ka, kb, ca * cb);
    return out;
  }

  /// Ring homomorphism onto the truncated matrix representation.
  TruncatedOperator evaluate(const FockConfig& cfg) const {
    auto [a, adag] = ladder_ops(cfg);
    std::uint32_t max_m = 0, max_n = 0;
    for (const auto& [key, c] : terms_) {
      max_m = std::max(max_m, key.first);
      max_n = std::max(max_n, key.second);
    }
    std::vector<Matrix> apow(max_n + 1), dpow(max_m + 1);
    apow[0] = Matrix::Identity(a.matrix().rows(), a.matrix().cols());
    dpow[0] = apow[0];
    for (std::uint32_t k = 1; k <= max_n; ++k)
      apow[k] = apow[k - 1] * a.matrix();
    for (std::uint32_t k = 1; k <= max_m; ++k)
      dpow[k] = dpow[k - 1] * adag.matrix();
    Matrix out = Matrix::Zero(a.matrix().rows(), a.matrix().cols());
    for (const auto& [key, c] : terms_)
      out += c * (dpow[key.first] * apow[key.second]);
    return {std::move(out), cfg.trusted_block};
  }

  friend bool operator==(const NormalPolynomial& a, const NormalPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  /// Largest coefficient difference over the union of monomials.
  static double distance(const NormalPolynomial& a, const NormalPolynomial& b) {
    double d = 0.0;
    for (const auto& [key, c] : a.terms_)
      d = std::max(d, std::abs(c - b.coefficient(key.first, key.second)));
    for (const auto& [key, c] : b.terms_)
      d = std::max(d, std::abs(c - a.coefficient(key.first, key.second)));
    return d;
  }

 private:
  void add_term(const Key& key, Complex c) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (c != Complex(0.0)) terms_[key] = c;
      return;
    }
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }

  // (a^dag^m1 a^n1)(a^dag^m2 a^n2): reorder the inner a^n1 a^dag^m2 factor.
  void accumulate_monomial_product(const Key& ka, const Key& kb, Complex c) {
    const std::uint32_t m1 = ka.first, n1 = ka.second;
    const std::uint32_t m2 = kb.first, n2 = kb.second;
    const std::uint32_t kmax = std::min(n1, m2);
    double factor = 1.0;  // k! C(n1,k) C(m2,k), built incrementally
    for (std::uint32_t k = 0; k <= kmax; ++k) {
      if (k > 0) factor *= static_cast<double>((n1 - k + 1)) *
                           static_cast<double>((m2 - k + 1)) / k;
      add_term({m1 + m2 - k, n1 + n2 - k}, c * factor);
    }
  }

  std::map<Key, Complex> terms_;
};

/* Linear form alpha q + beta p with complex coefficients.  The ladder-side
 * coefficients follow from q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt 2):
 *     alpha q + beta p = lambda_plus a^dag + lambda_minus a,
 *     lambda_plus = (alpha + i beta)/sqrt(2), lambda_minus = (alpha - i beta)/sqrt(2).
 */
struct LinearForm {
  Complex alpha;  // coefficient of q
  Complex beta;   // coefficient of p

  Complex ladder_plus() const {
    return (alpha + kImag * beta) / std::sqrt(2.0);
  }
  Complex ladder_minus() const {
    return (alpha - kImag * beta) / std::sqrt(2.0);
  }

  NormalPolynomial as_polynomial() const {
    return alpha * NormalPolynomial::position() +
           beta * NormalPolynomial::momentum();
  }

  TruncatedOperator evaluate(const FockConfig& cfg) const {
    auto [q, p] = quadrature_ops(cfg);
    return alpha * q + beta * p;
  }
};

}  // namespace ordcalc
