#pragma once

// Hilbert class polynomials H_D(X) from high-precision values of j at the CM
// points of the reduced forms of discriminant -D.

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ecpp/bigfloat.hpp"

namespace ecpp {

struct ClassPolynomial {
  std::int64_t d = 0;
  /// coeffs[i] is the coefficient of X^i; the polynomial is monic of degree h.
  std::vector<mpz_class> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  friend bool operator==(const ClassPolynomial&, const ClassPolynomial&) = default;
};

/// j(tau) through the product expansion of the discriminant function,
/// j = (256 f + 1)^3 / f with f = Delta(2 tau) / Delta(tau). The series is cut
/// once its tail is provably below 2^-(precision + 32); the result carries
/// precision + 32 bits. Throws PrecisionExhausted when Im(tau) is too small
/// for the tail bound (|q| >= 1/2) or not positive.
BigComplex j_invariant(const BigComplex& tau, mpfr_prec_t precision);

/// Guard bits added on top of the height estimate: 33 + h.
unsigned guard_bits(std::int64_t h);

/// ceil(pi sqrt(D) / ln 2 * sum 1/A) + guard_bits(h).
unsigned precision_for(std::int64_t d);

/// H_D for fundamental -D. Starts at `start_precision` (default
/// precision_for(d)) and doubles it on RoundingUncertain, at most three times.
ClassPolynomial hilbert_class_poly(std::int64_t d, std::optional<unsigned> start_precision = {});

/// One attempt at a fixed precision; throws RoundingUncertain when any
/// coefficient lands within 1/4 of a half-integer or a real root shows an
/// imaginary part above 2^-guard.
ClassPolynomial hilbert_class_poly_at(std::int64_t d, unsigned precision);

/// Cache file `HD_<D>.txt`: D, h, then the coefficients from the leading one
/// down to the constant term, one decimal integer per line.
std::string format_class_poly(const ClassPolynomial& poly);
ClassPolynomial parse_class_poly(const std::string& text);
std::filesystem::path class_poly_filename(std::int64_t d);

/// In-memory memo of class polynomials, optionally backed by a directory of
/// cache files that is read before computing and written after.
class ClassPolyCache {
 public:
  explicit ClassPolyCache(std::optional<std::filesystem::path> directory = std::nullopt);

  /// Reads the directory from ECPP_HD_CACHE when set.
  static std::shared_ptr<ClassPolyCache> from_environment();
  static std::optional<std::filesystem::path> environment_directory();

  const ClassPolynomial& get(std::int64_t d);
  std::size_t computed() const { return computed_; }

 private:
  std::optional<std::filesystem::path> directory_;
  std::mutex mutex_;
  std::map<std::int64_t, ClassPolynomial> polys_;
  std::size_t computed_ = 0;
};

}  // namespace ecpp
