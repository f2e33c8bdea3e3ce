#pragma once

// Multiprecision modular arithmetic kernels shared by every other module.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <variant>

namespace ecpp {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'ecbbULL;
inline constexpr int kDefaultPrpRounds = 20;

/// An element of Z/nZ, always stored reduced into [0, n).
struct Residue {
  mpz_class value;
  mpz_class modulus;

  Residue(const mpz_class& v, const mpz_class& n);

  friend bool operator==(const Residue& x, const Residue& y) {
    return x.value == y.value && x.modulus == y.modulus;
  }
};

/// A nontrivial divisor exposed by a failed inversion.
struct Factor {
  mpz_class d;
};

/// Uniform integer in [0, bound) drawn from a 64-bit Mersenne Twister (64
/// extra bits are drawn, so the modulo bias is below 2^-64).
mpz_class random_below(std::mt19937_64& rng, const mpz_class& bound);

/// Least nonnegative residue of a modulo n (n > 0).
mpz_class mod(const mpz_class& a, const mpz_class& n);

Residue mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& n);

/// Jacobi symbol (a/n) for odd positive n. Throws PreconditionViolated on even n.
int jacobi(const mpz_class& a, const mpz_class& n);

/// Kronecker symbol (a/n) for machine-sized arguments, n > 0.
int kronecker(std::int64_t a, std::uint64_t n);

/// Tonelli-Shanks square root modulo an odd prime p; returns the smaller of the
/// two roots. Throws NonResidue when (a/p) = -1 and AlgorithmFailure when an
/// internal step contradicts primality of p.
Residue sqrt_mod(const mpz_class& a, const mpz_class& p);

/// Trial division by the primes below 1000, then `rounds` Miller-Rabin rounds
/// with bases drawn from a generator seeded by `seed`.
bool is_probable_prime(const mpz_class& n, int rounds = kDefaultPrpRounds,
                       std::uint64_t seed = kDefaultSeed);

/// Deterministic primality by trial division; intended for n < 2^64.
bool is_prime_trial_division(const mpz_class& n);

/// a^-1 mod n, or the divisor gcd(a, n) when a is not a unit. Throws
/// PreconditionViolated when a is 0 mod n.
std::variant<Residue, Factor> inv_mod(const mpz_class& a, const mpz_class& n);

}  // namespace ecpp
