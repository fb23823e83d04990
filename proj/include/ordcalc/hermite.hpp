#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ordcalc {

/// Largest index accepted by hermite_function.  The recurrence itself is
/// stable far beyond this, but callers needing higher modes almost certainly
/// picked the wrong truncation, so we refuse instead of silently grinding.
inline constexpr int kHermiteIndexCap = 200;

namespace detail {

/* Fills out[0..nmax] with the orthonormal oscillator eigenfunctions
 * psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)) using the normalized
 * three-term recurrence
 *     psi_n = x sqrt(2/n) psi_{n-1} - sqrt((n-1)/n) psi_{n-2}.
 * Working on the normalized functions keeps every intermediate O(1); never
 * build H_n and the factorial normalization separately.
 */
inline void hermite_sequence(int nmax, double x, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(nmax) + 1);
  const double psi0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  out[0] = psi0;
  if (nmax == 0) return;
  out[1] = std::sqrt(2.0) * x * psi0;
  for (int n = 2; n <= nmax; ++n) {
    out[static_cast<std::size_t>(n)] =
        x * std::sqrt(2.0 / n) * out[static_cast<std::size_t>(n - 1)] -
        std::sqrt((n - 1.0) / n) * out[static_cast<std::size_t>(n - 2)];
  }
}

}  // namespace detail

/// Value of the n-th orthonormal harmonic-oscillator eigenfunction at x.
inline double hermite_function(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_function: negative index");
  if (n > kHermiteIndexCap)
    throw std::invalid_argument("hermite_function: index above cap " +
                                std::to_string(kHermiteIndexCap));
  std::vector<double> seq;
  detail::hermite_sequence(n, x, seq);
  return seq[static_cast<std::size_t>(n)];
}

}  // namespace ordcalc
