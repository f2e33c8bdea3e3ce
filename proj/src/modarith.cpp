#include "ecpp/modarith.hpp"

#include <array>
#include <vector>

#include "ecpp/errors.hpp"

namespace ecpp {
namespace {

constexpr auto kSmallPrimes = [] {
  std::array<unsigned, 168> primes{};
  std::size_t count = 0;
  for (unsigned n = 2; n < 1000; ++n) {
    bool prime = true;
    for (unsigned d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes[count++] = n;
  }
  return primes;
}();

}  // namespace

Residue::Residue(const mpz_class& v, const mpz_class& n) : value(mod(v, n)), modulus(n) {
  if (n < 2) throw PreconditionViolated("residue modulus must be at least 2");
}

mpz_class mod(const mpz_class& a, const mpz_class& n) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

Residue mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& n) {
  if (n < 2) throw PreconditionViolated("mod_pow: modulus must be at least 2");
  if (exp < 0) throw PreconditionViolated("mod_pow: negative exponent");
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), n.get_mpz_t());
  return Residue(r, n);
}

int jacobi(const mpz_class& a, const mpz_class& n) {
  if (n <= 0 || mpz_even_p(n.get_mpz_t())) {
    throw PreconditionViolated("jacobi: modulus must be odd and positive");
  }
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

int kronecker(std::int64_t a, std::uint64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    const std::int64_t a8 = ((a % 8) + 8) % 8;
    if (a8 == 3 || a8 == 5) result = -result;
  }
  // Now n is odd: reduce to the Jacobi symbol.
  std::uint64_t x = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(n)) +
                                                static_cast<std::int64_t>(n)) %
                                               static_cast<std::int64_t>(n));
  std::uint64_t m = n;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const std::uint64_t m8 = m % 8;
      if (m8 == 3 || m8 == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

mpz_class random_below(std::mt19937_64& rng, const mpz_class& bound) {
  if (bound <= 0) throw PreconditionViolated("random_below: bound must be positive");
  const std::size_t words = mpz_sizeinbase(bound.get_mpz_t(), 2) / 64 + 2;
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = rng();
  mpz_class x;
  mpz_import(x.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
  mpz_mod(x.get_mpz_t(), x.get_mpz_t(), bound.get_mpz_t());
  return x;
}

Residue sqrt_mod(const mpz_class& a_in, const mpz_class& p) {
  if (p < 3 || mpz_even_p(p.get_mpz_t())) {
    throw PreconditionViolated("sqrt_mod: modulus must be an odd prime");
  }
  const mpz_class a = mod(a_in, p);
  if (a == 0) return Residue(0, p);
  const int symbol = jacobi(a, p);
  if (symbol == -1) throw NonResidue("sqrt_mod: " + a.get_str() + " is not a square");
  if (symbol == 0) throw AlgorithmFailure("sqrt_mod: modulus shares a factor with the input");

  // p - 1 = q * 2^s with q odd.
  mpz_class q = p - 1;
  const unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  q >>= s;

  mpz_class r;
  if (s == 1) {
    mpz_class e = (p + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  } else {
    // Smallest quadratic non-residue z.
    mpz_class z = 2;
    for (;; ++z) {
      const int js = jacobi(z, p);
      if (js == -1) break;
      if (js == 0 || z > 100000) throw AlgorithmFailure("sqrt_mod: no non-residue found");
    }
    mpz_class c, t, e = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    mpz_class t2, b;
    while (t != 1) {
      // Least i with t^(2^i) = 1.
      unsigned long i = 0;
      t2 = t;
      while (t2 != 1) {
        t2 = t2 * t2 % p;
        if (++i == m) throw AlgorithmFailure("sqrt_mod: order of t does not divide 2^(m-1)");
      }
      b = c;
      for (unsigned long k = 0; k + i + 1 < m; ++k) b = b * b % p;
      m = i;
      c = b * b % p;
      t = t * c % p;
      r = r * b % p;
    }
  }
  if (r * r % p != a) throw AlgorithmFailure("sqrt_mod: result does not square to the input");
  const mpz_class other = p - r;
  return Residue(other < r ? other : r, p);
}

bool is_prime_trial_division(const mpz_class& n) {
  if (n < 2) return false;
  if (!n.fits_ulong_p()) throw PreconditionViolated("trial division needs n < 2^64");
  const unsigned long v = n.get_ui();
  if (v < 4) return true;
  if (v % 2 == 0) return false;
  for (unsigned long d = 3; d <= v / d; d += 2) {
    if (v % d == 0) return false;
  }
  return true;
}

bool is_probable_prime(const mpz_class& n, int rounds, std::uint64_t seed) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (n < 1000 * 1000) return true;

  mpz_class d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  const mpz_class n_minus_1 = n - 1;
  const mpz_class range = n - 3;

  std::mt19937_64 rng(seed);
  mpz_class x;
  for (int round = 0; round < rounds; ++round) {
    const mpz_class base = random_below(rng, range) + 2;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned long k = 1; k < s; ++k) {
      x = x * x % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::variant<Residue, Factor> inv_mod(const mpz_class& a, const mpz_class& n) {
  if (n < 2) throw PreconditionViolated("inv_mod: modulus must be at least 2");
  const mpz_class r = mod(a, n);
  if (r == 0) throw PreconditionViolated("inv_mod: zero has no inverse");
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t()) != 0) return Residue(inv, n);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
  return Factor{g};
}

}  // namespace ecpp
