#pragma once

// Dense univariate polynomials over Z/NZ and Cantor-Zassenhaus root finding.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"

namespace ecpp {

/// A leading coefficient that could not be inverted; `factor()` divides N.
class NonInvertibleElement : public EcppError {
 public:
  explicit NonInvertibleElement(mpz_class factor)
      : EcppError("non-invertible leading coefficient, factor " + factor.get_str()),
        factor_(std::move(factor)) {}
  const mpz_class& factor() const { return factor_; }

 private:
  mpz_class factor_;
};

class PolyModN {
 public:
  /// coeffs[i] multiplies X^i. Coefficients are reduced and leading zeros trimmed.
  PolyModN(std::vector<mpz_class> coeffs, mpz_class n);

  static PolyModN x(const mpz_class& n);
  static PolyModN constant(const mpz_class& c, const mpz_class& n);

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& modulus() const { return n_; }
  mpz_class operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : mpz_class(0); }

  mpz_class evaluate(const mpz_class& x) const;
  /// Scales to a monic polynomial; throws NonInvertibleElement.
  PolyModN monic() const;

  friend PolyModN operator+(const PolyModN& f, const PolyModN& g);
  friend PolyModN operator-(const PolyModN& f, const PolyModN& g);
  friend PolyModN operator*(const PolyModN& f, const PolyModN& g);
  friend bool operator==(const PolyModN& f, const PolyModN& g) {
    return f.n_ == g.n_ && f.coeffs_ == g.coeffs_;
  }

 private:
  std::vector<mpz_class> coeffs_;
  mpz_class n_;
};

struct DivMod {
  PolyModN quotient;
  PolyModN remainder;
};

/// Euclidean division; throws NonInvertibleElement if g's leading coefficient
/// is not a unit.
DivMod divmod(const PolyModN& f, const PolyModN& g);
PolyModN rem(const PolyModN& f, const PolyModN& g);

/// Monic gcd (zero polynomial when both inputs are zero).
PolyModN gcd(const PolyModN& f, const PolyModN& g);

/// base^exp mod (N, modpoly) by square-and-multiply; modpoly monic of degree >= 1.
PolyModN poly_powmod(const PolyModN& base, const mpz_class& exp, const PolyModN& modpoly);

struct SplitStats {
  /// Random splitting attempts (one per value of a tried).
  int split_rounds = 0;
};

/// One root of the monic polynomial h modulo the odd probable prime N. First
/// restricts to g = gcd(X^N - X, h), then splits with gcd((X+a)^((N-1)/2) - 1, g)
/// for a drawn from a generator seeded with `seed`. Throws NoRoot when g is
/// constant and CompositeDetected when an inversion exposes a factor of N.
Residue find_root(const PolyModN& h, std::uint64_t seed, SplitStats* stats = nullptr);

}  // namespace ecpp
