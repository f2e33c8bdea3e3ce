#pragma once

// Factoring candidate orders m = N + 1 -/+ U into c * N' with a B-smooth c,
// driven by a table of (N + 1) mod p for the primes p <= B.

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace ecpp {

struct SieveTable {
  std::uint32_t bound = 0;
  std::vector<std::uint32_t> primes;
  /// residues[i] = (N + 1) mod primes[i].
  std::vector<std::uint32_t> residues;

  friend bool operator==(const SieveTable&, const SieveTable&) = default;
};

/// Primes up to `bound` in ascending order.
std::vector<std::uint32_t> primes_up_to(std::uint32_t bound);

SieveTable residue_table(const mpz_class& n, std::uint32_t bound);

struct SieveHits {
  /// Primes dividing m = N + 1 - U.
  std::vector<std::uint32_t> minus;
  /// Primes dividing m' = N + 1 + U.
  std::vector<std::uint32_t> plus;
};

/// Sieves both orders at once from u_i = U mod p_i. Primes with (-D/p) = -1
/// are skipped. The prime 2 is always skipped here; extract_cofactor strips it
/// unconditionally.
SieveHits sieve_m(const mpz_class& u, const SieveTable& table, std::int64_t d);

struct FactorResult {
  mpz_class c;
  mpz_class nprime;
  /// (prime, exponent) pairs of c.
  std::vector<std::pair<std::uint32_t, unsigned>> factors;
};

/// Divides out every power of 2 and of each hit prime. Throws FullySmooth
/// when nothing is left (N' = 1).
FactorResult extract_cofactor(const mpz_class& m, const std::vector<std::uint32_t>& hits);

/// N >= N' * 2^delta.
bool early_abort_ok(const mpz_class& n, const mpz_class& nprime, unsigned delta);

/// Table for N' = (N + 1 - U) / c from the table for N, via
/// r' = (r - u) c^-1 + 1 mod p, falling back to (N' + 1) mod p when p | c.
SieveTable update_table(const SieveTable& table, const mpz_class& u, const mpz_class& c, const mpz_class& nprime);

/// max(1000, 8 * bitlength(N)).
std::uint32_t default_smooth_bound(const mpz_class& n);

}  // namespace ecpp
