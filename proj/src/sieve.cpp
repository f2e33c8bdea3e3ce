#include "ecpp/sieve.hpp"

#include <algorithm>

#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"

namespace ecpp {
namespace {

std::uint32_t mod_small(const mpz_class& x, std::uint32_t p) {
  // mpz_fdiv_ui yields the nonnegative remainder for negative x as well.
  return static_cast<std::uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), p));
}

std::uint32_t inverse_small(std::uint32_t c, std::uint32_t p) {
  std::int64_t t = 0;
  std::int64_t new_t = 1;
  std::int64_t r = p;
  std::int64_t new_r = c;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

}  // namespace

std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

SieveTable residue_table(const mpz_class& n, std::uint32_t bound) {
  if (bound < 2) throw PreconditionViolated("residue_table: bound must be at least 2");
  SieveTable t;
  t.bound = bound;
  t.primes = primes_up_to(bound);
  t.residues.reserve(t.primes.size());
  const mpz_class n1 = n + 1;
  for (std::uint32_t p : t.primes) t.residues.push_back(mod_small(n1, p));
  return t;
}

SieveHits sieve_m(const mpz_class& u, const SieveTable& table, std::int64_t d) {
  SieveHits hits;
  for (std::size_t i = 0; i < table.primes.size(); ++i) {
    const std::uint32_t p = table.primes[i];
    if (p == 2) continue;
    if (kronecker(-d, p) == -1) continue;
    const std::uint32_t ui = mod_small(u, p);
    const std::uint32_t r = table.residues[i];
    if (ui == r) hits.minus.push_back(p);
    if ((ui + r) % p == 0) hits.plus.push_back(p);
  }
  return hits;
}

FactorResult extract_cofactor(const mpz_class& m, const std::vector<std::uint32_t>& hits) {
  if (m <= 0) throw PreconditionViolated("extract_cofactor: m must be positive");
  FactorResult out;
  out.c = 1;
  out.nprime = m;
  auto strip = [&](std::uint32_t p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(out.nprime.get_mpz_t(), p)) {
      mpz_divexact_ui(out.nprime.get_mpz_t(), out.nprime.get_mpz_t(), p);
      out.c *= p;
      ++e;
    }
    if (e > 0) out.factors.emplace_back(p, e);
  };
  strip(2);
  for (std::uint32_t p : hits) {
    if (p != 2) strip(p);
  }
  if (out.nprime == 1) throw FullySmooth("extract_cofactor: m is smooth over the hit primes");
  return out;
}

bool early_abort_ok(const mpz_class& n, const mpz_class& nprime, unsigned delta) {
  mpz_class scaled;
  mpz_mul_2exp(scaled.get_mpz_t(), nprime.get_mpz_t(), delta);
  return n >= scaled;
}

SieveTable update_table(const SieveTable& table, const mpz_class& u, const mpz_class& c, const mpz_class& nprime) {
  SieveTable out;
  out.bound = table.bound;
  out.primes = table.primes;
  out.residues.resize(table.residues.size());
  const mpz_class np1 = nprime + 1;
  for (std::size_t i = 0; i < table.primes.size(); ++i) {
    const std::uint32_t p = table.primes[i];
    const std::uint32_t cm = mod_small(c, p);
    if (cm == 0) {
      out.residues[i] = mod_small(np1, p);
      continue;
    }
    const std::uint64_t diff = (static_cast<std::uint64_t>(table.residues[i]) + p - mod_small(u, p)) % p;
    out.residues[i] = static_cast<std::uint32_t>((diff * inverse_small(cm, p) + 1) % p);
  }
  return out;
}

std::uint32_t default_smooth_bound(const mpz_class& n) {
  const auto bits = static_cast<std::uint32_t>(mpz_sizeinbase(n.get_mpz_t(), 2));
  return std::max<std::uint32_t>(1000, 8 * bits);
}

}  // namespace ecpp
