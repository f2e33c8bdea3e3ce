#include "ecpp/curve.hpp"

#include <array>
#include <stdexcept>

#include "ecpp/errors.hpp"

namespace ecpp {
namespace {

mpz_class mulmod(const mpz_class& x, const mpz_class& y, const mpz_class& n) {
  mpz_class r = x * y;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
  return r;
}

mpz_class gcd_of(const mpz_class& x, const mpz_class& n) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  return g;
}

}  // namespace

CurveModN::CurveModN(const mpz_class& a_in, const mpz_class& b_in, const mpz_class& n_in)
    : a(mod(a_in, n_in)), b(mod(b_in, n_in)), n(n_in) {
  const mpz_class g = gcd_of(discriminant(), n);
  if (g != 1) throw SingularCurve(g, "curve discriminant is not a unit modulo N");
}

mpz_class CurveModN::discriminant() const {
  return mod(4 * a * a * a + 27 * b * b, n);
}

bool on_curve(const ProjPoint& p, const CurveModN& e) {
  const mpz_class& n = e.n;
  const mpz_class lhs = p.y * p.y * p.z;
  const mpz_class rhs = p.x * p.x * p.x + e.a * p.x * p.z * p.z + e.b * p.z * p.z * p.z;
  return mod(lhs - rhs, n) == 0 && !(mod(p.x, n) == 0 && mod(p.y, n) == 0 && mod(p.z, n) == 0);
}

ProjPoint negate(const ProjPoint& p, const CurveModN& e) {
  if (p.is_infinity()) return p;
  return {p.x, mod(-p.y, e.n), p.z};
}

PseudoResult pseudo_add(const ProjPoint& p, const ProjPoint& q, const CurveModN& e) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  const mpz_class& n = e.n;
  mpz_class num;
  mpz_class den;
  if (p.x != q.x) {
    num = q.y - p.y;
    den = q.x - p.x;
  } else {
    den = p.y + q.y;
    if (mod(den, n) == 0) return ProjPoint::infinity();
    num = 3 * p.x * p.x + e.a;
  }
  den = mod(den, n);
  auto inv = inv_mod(den, n);
  if (auto* f = std::get_if<Factor>(&inv)) return *f;
  const mpz_class lambda = mulmod(num, std::get<Residue>(inv).value, n);
  const mpz_class x3 = mod(lambda * lambda - p.x - q.x, n);
  const mpz_class y3 = mod(lambda * (p.x - x3) - p.y, n);
  return ProjPoint::affine(x3, y3);
}

PseudoResult scalar_mul(const mpz_class& m, const ProjPoint& p, const CurveModN& e) {
  if (m < 0) return scalar_mul(-m, negate(p, e), e);
  ProjPoint acc = ProjPoint::infinity();
  if (m == 0 || p.is_infinity()) return acc;
  for (long bit = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    PseudoResult d = pseudo_add(acc, acc, e);
    if (std::holds_alternative<Factor>(d)) return d;
    acc = std::get<ProjPoint>(std::move(d));
    if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
      PseudoResult s = pseudo_add(acc, p, e);
      if (std::holds_alternative<Factor>(s)) return s;
      acc = std::get<ProjPoint>(std::move(s));
    }
  }
  return acc;
}

std::variant<DivPolyTriple, Factor> divpoly_eval(const mpz_class& m, const ProjPoint& p, const CurveModN& e) {
  if (m < 1) throw PreconditionViolated("divpoly_eval: m must be positive");
  if (p.is_infinity()) throw PreconditionViolated("divpoly_eval: point must be affine");
  const mpz_class& n = e.n;
  const mpz_class& x = p.x;
  const mpz_class& y = p.y;
  const mpz_class& a = e.a;
  const mpz_class& b = e.b;

  auto inv2y = inv_mod(mod(2 * y, n), n);
  if (auto* f = std::get_if<Factor>(&inv2y)) return *f;
  const mpz_class half_inv_y = std::get<Residue>(inv2y).value;

  const mpz_class x2 = mulmod(x, x, n);
  const mpz_class psi2 = mod(2 * y, n);
  const mpz_class psi3 = mod(3 * x2 * x2 + 6 * a * x2 + 12 * b * x - a * a, n);
  const mpz_class psi4 = mulmod(
      mod(4 * y, n),
      mod(x2 * x2 * x2 + 5 * a * x2 * x2 + 20 * b * x2 * x - 5 * a * a * x2 - 4 * a * b * x - 8 * b * b - a * a * a, n),
      n);
  const mpz_class psi5 = mod(psi4 * psi2 * psi2 * psi2 - psi3 * psi3 * psi3, n);

  // w[i] = psi_{k-3+i}; starting at k = 1 the window is psi_{-2} .. psi_5.
  std::array<mpz_class, 8> w = {mod(-psi2, n), mpz_class(n - 1), 0, 1, psi2, psi3, psi4, psi5};
  std::array<mpz_class, 9> next;
  mpz_class k = 1;

  auto at = [&](const mpz_class& t) -> const mpz_class& {
    return w[static_cast<std::size_t>(mpz_class(t - (k - 3)).get_si())];
  };

  for (long bit = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
    // next[j] = psi_{2k-3+j}
    for (int j = 0; j < 9; ++j) {
      const mpz_class t = 2 * k - 3 + j;
      if (mpz_odd_p(t.get_mpz_t())) {
        const mpz_class i = (t - 1) / 2;
        const mpz_class& pi = at(i);
        const mpz_class& q1 = at(i + 1);
        const mpz_class lhs = mulmod(at(i + 2), mulmod(mulmod(pi, pi, n), pi, n), n);
        const mpz_class rhs = mulmod(at(i - 1), mulmod(mulmod(q1, q1, n), q1, n), n);
        next[static_cast<std::size_t>(j)] = mod(lhs - rhs, n);
      } else {
        const mpz_class i = t / 2;
        const mpz_class& pm1 = at(i - 1);
        const mpz_class& pp1 = at(i + 1);
        const mpz_class inner =
            mod(mulmod(at(i + 2), mulmod(pm1, pm1, n), n) - mulmod(at(i - 2), mulmod(pp1, pp1, n), n), n);
        next[static_cast<std::size_t>(j)] = mulmod(mulmod(at(i), inner, n), half_inv_y, n);
      }
    }
    const bool one = mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0;
    for (std::size_t j = 0; j < 8; ++j) w[j] = std::move(next[j + (one ? 1 : 0)]);
    k = 2 * k + (one ? 1 : 0);
  }

  const mpz_class& pm2 = w[1];
  const mpz_class& pm1 = w[2];
  const mpz_class& psi = w[3];
  const mpz_class& pp1 = w[4];
  const mpz_class& pp2 = w[5];
  DivPolyTriple t;
  t.psi = psi;
  t.phi = mod(mulmod(x, mulmod(psi, psi, n), n) - mulmod(pp1, pm1, n), n);
  const mpz_class om = mod(mulmod(pp2, mulmod(pm1, pm1, n), n) - mulmod(pm2, mulmod(pp1, pp1, n), n), n);
  const mpz_class half = (n + 1) / 2;
  t.omega = mulmod(mulmod(om, half_inv_y, n), half, n);
  return t;
}

PseudoResult assemble(const DivPolyTriple& t, const CurveModN& e) {
  const mpz_class& n = e.n;
  if (mod(t.psi, n) == 0) return ProjPoint::infinity();
  auto inv = inv_mod(t.psi, n);
  if (auto* f = std::get_if<Factor>(&inv)) return *f;
  const mpz_class ip = std::get<Residue>(inv).value;
  const mpz_class ip2 = mulmod(ip, ip, n);
  return ProjPoint::affine(mulmod(t.phi, ip2, n), mulmod(t.omega, mulmod(ip2, ip, n), n));
}

mpz_class smallest_nonresidue(const mpz_class& n) {
  for (mpz_class c = 2;; ++c) {
    if (c >= n) throw PreconditionViolated("smallest_nonresidue: no nonresidue below N");
    const int s = jacobi(c, n);
    if (s == -1) return c;
    if (s == 0) throw CompositeDetected(n, gcd_of(c, n), "small factor found while searching for a nonresidue");
  }
}

std::vector<CurveModN> curve_from_j(const mpz_class& j_in, const mpz_class& n) {
  if (n < 5 || mpz_even_p(n.get_mpz_t()) || n % 3 == 0) {
    throw PreconditionViolated("curve_from_j: N must be coprime to 6 and at least 5");
  }
  const mpz_class j0 = mod(j_in, n);
  const mpz_class j1728 = mod(1728, n);
  std::vector<CurveModN> out;
  if (j0 == 0) {
    mpz_class g = 2;
    const bool cubic = n % 3 == 1;
    for (;; ++g) {
      if (g >= n) throw PreconditionViolated("curve_from_j: no twist generator below N");
      const int s = jacobi(g, n);
      if (s == 0) throw CompositeDetected(n, gcd_of(g, n), "small factor found while searching for a twist");
      if (s != -1) continue;
      if (cubic && mod_pow(g, (n - 1) / 3, n).value == 1) continue;
      break;
    }
    mpz_class bi = 1;
    for (int i = 0; i < 6; ++i) {
      out.emplace_back(0, bi, n);
      bi = mulmod(bi, g, n);
    }
    return out;
  }
  if (j0 == j1728) {
    const mpz_class g = smallest_nonresidue(n);
    mpz_class ai = 1;
    for (int i = 0; i < 4; ++i) {
      out.emplace_back(ai, 0, n);
      ai = mulmod(ai, g, n);
    }
    return out;
  }
  auto inv = inv_mod(mod(1728 - j0, n), n);
  if (auto* f = std::get_if<Factor>(&inv)) throw CompositeDetected(n, f->d, "1728 - j is not a unit");
  const mpz_class k = mulmod(j0, std::get<Residue>(inv).value, n);
  const mpz_class c = smallest_nonresidue(n);
  const mpz_class c2 = mulmod(c, c, n);
  out.emplace_back(3 * k, 2 * k, n);
  out.emplace_back(mulmod(3 * k, c2, n), mulmod(2 * k, mulmod(c2, c, n), n), n);
  return out;
}

ProjPoint find_point(const CurveModN& e, std::uint64_t seed) {
  const mpz_class& n = e.n;
  mpz_class x = 0;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    x = random_below(rng, n);
  }
  mpz_class cap;
  mpz_sqrt(cap.get_mpz_t(), n.get_mpz_t());
  if (cap < 64) cap = 64;
  if (cap > n) cap = n;
  for (mpz_class trial = 0; trial < cap; ++trial, x = x + 1 == n ? mpz_class(0) : mpz_class(x + 1)) {
    const mpz_class f = mod(x * x * x + e.a * x + e.b, n);
    if (f == 0) continue;
    const int s = jacobi(f, n);
    if (s == 0) throw CompositeDetected(n, gcd_of(f, n), "curve value shares a factor with N");
    if (s != 1) continue;
    mpz_class y;
    try {
      y = sqrt_mod(f, n).value;
    } catch (const NonResidue&) {
      throw CompositeDetected(n, 0, "square root failed for a Jacobi-square");
    } catch (const AlgorithmFailure&) {
      throw CompositeDetected(n, 0, "square root failed for a Jacobi-square");
    }
    if (mulmod(y, y, n) != f) throw CompositeDetected(n, 0, "square root does not square back");
    const mpz_class g = gcd_of(y, n);
    if (g != 1) throw CompositeDetected(n, g, "point ordinate shares a factor with N");
    return ProjPoint::affine(x, y);
  }
  throw NoPointFound("find_point: no point with a unit ordinate in the trial range");
}

bool exceeds_quartic_bound(const mpz_class& n, const mpz_class& nprime) {
  mpz_class r;
  const bool exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), 4) != 0;
  const mpz_class bound = exact ? mpz_class((r + 1) * (r + 1)) : mpz_class((r + 2) * (r + 2));
  return exact ? nprime > bound : nprime >= bound;
}

OrderCheck order_check(const mpz_class& c, const mpz_class& nprime, const CurveModN& e, const ProjPoint& p) {
  const mpz_class& n = e.n;
  if (p.is_infinity()) throw PreconditionViolated("order_check: P is the identity");
  if (c < 1) throw PreconditionViolated("order_check: cofactor must be positive");
  if (!exceeds_quartic_bound(n, nprime)) throw PreconditionViolated("order_check: N' is below (N^(1/4)+1)^2");

  PseudoResult q = scalar_mul(c, p, e);
  if (auto* f = std::get_if<Factor>(&q)) throw CompositeDetected(n, f->d, "[c]P exposed a factor");
  const ProjPoint qp = std::get<ProjPoint>(q);
  if (qp.is_infinity()) return OrderCheck::kCofactorAnnihilates;
  PseudoResult r = scalar_mul(nprime, qp, e);
  if (auto* f = std::get_if<Factor>(&r)) throw CompositeDetected(n, f->d, "[N'][c]P exposed a factor");
  if (!std::get<ProjPoint>(r).is_infinity()) return OrderCheck::kOrderMismatch;

  if (c == 2) {
    auto full = divpoly_eval(2 * nprime, p, e);
    if (auto* f = std::get_if<Factor>(&full)) throw CompositeDetected(n, f->d, "2y is not a unit");
    if (std::get<DivPolyTriple>(full).psi != 0) {
      throw std::logic_error("order_check: psi_{2N'}(P) != 0 although [2N']P = O");
    }
    auto half = divpoly_eval(nprime, p, e);
    if (auto* f = std::get_if<Factor>(&half)) throw CompositeDetected(n, f->d, "2y is not a unit");
    const mpz_class g = gcd_of(std::get<DivPolyTriple>(half).psi, n);
    if (g != 1 && g != n) throw CompositeDetected(n, g, "psi_{N'}(P) exposed a factor");
  }
  return OrderCheck::kPassed;
}

}  // namespace ecpp
