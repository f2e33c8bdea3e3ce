#pragma once

// Short Weierstrass curves y^2 = x^3 + ax + b over Z/NZ for N a probable prime.
// Arithmetic is affine; every inversion that fails hands back a divisor of N.

#include <gmpxx.h>

#include <cstdint>
#include <variant>
#include <vector>

#include "ecpp/modarith.hpp"

namespace ecpp {

struct CurveModN {
  mpz_class a;
  mpz_class b;
  mpz_class n;

  /// Reduces a, b and throws SingularCurve when gcd(4a^3 + 27b^2, N) != 1.
  CurveModN(const mpz_class& a, const mpz_class& b, const mpz_class& n);

  /// 4a^3 + 27b^2 mod N.
  mpz_class discriminant() const;
  friend bool operator==(const CurveModN&, const CurveModN&) = default;
};

/// Projective point; affine points carry z = 1 and the identity is (0:1:0).
struct ProjPoint {
  mpz_class x;
  mpz_class y;
  mpz_class z;

  static ProjPoint infinity() { return {0, 1, 0}; }
  static ProjPoint affine(const mpz_class& x, const mpz_class& y) { return {x, y, 1}; }
  bool is_infinity() const { return z == 0; }
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

/// Either a point or a nontrivial divisor of N.
using PseudoResult = std::variant<ProjPoint, Factor>;

bool on_curve(const ProjPoint& p, const CurveModN& e);
ProjPoint negate(const ProjPoint& p, const CurveModN& e);

PseudoResult pseudo_add(const ProjPoint& p, const ProjPoint& q, const CurveModN& e);
PseudoResult scalar_mul(const mpz_class& m, const ProjPoint& p, const CurveModN& e);

/// Values of phi_m, psi_m, omega_m at an affine point.
struct DivPolyTriple {
  mpz_class phi;
  mpz_class psi;
  mpz_class omega;
};

/// Evaluates the division polynomials at P = (x, y) with gcd(y, N) = 1, using a
/// doubling ladder over the window psi_{k-3} .. psi_{k+4}. Returns a Factor if
/// 2y is not invertible.
std::variant<DivPolyTriple, Factor> divpoly_eval(const mpz_class& m, const ProjPoint& p, const CurveModN& e);

/// The point (phi*psi : omega : psi^3) scaled to affine form; infinity when
/// psi = 0, a Factor when psi is a nonzero non-unit.
PseudoResult assemble(const DivPolyTriple& t, const CurveModN& e);

/// Smallest c >= 2 with (c/N) = -1.
mpz_class smallest_nonresidue(const mpz_class& n);

/// Curves with j-invariant j0 modulo N: the generic pair (E, twist), the six
/// sextic twists when j0 = 0, or the four quartic twists when j0 = 1728.
std::vector<CurveModN> curve_from_j(const mpz_class& j0, const mpz_class& n);

/// An affine point with y a unit. seed = 0 scans x = 0, 1, 2, ...; any other
/// seed starts the scan at a pseudorandom x. Gives up with NoPointFound after
/// max(64, sqrt N) candidates.
ProjPoint find_point(const CurveModN& e, std::uint64_t seed = 0);

/// N' > (N^(1/4) + 1)^2, decided in exact integer arithmetic (conservatively
/// when N is not a fourth power).
bool exceeds_quartic_bound(const mpz_class& n, const mpz_class& nprime);

enum class OrderCheck {
  kPassed,
  /// [c]P = O; another point is needed.
  kCofactorAnnihilates,
  /// [N'][c]P != O; the curve does not have order c*N'.
  kOrderMismatch,
};

/// Checks [c]P != O and [N'][c]P = O. For c = 2 the result is cross-checked
/// against psi_{2N'}(P) = 0 and gcd(psi_{N'}(P), N) in {1, N}.
/// Throws CompositeDetected on any exposed factor and PreconditionViolated if
/// N' fails the quartic bound or P is the identity.
OrderCheck order_check(const mpz_class& c, const mpz_class& nprime, const CurveModN& e, const ProjPoint& p);

}  // namespace ecpp
