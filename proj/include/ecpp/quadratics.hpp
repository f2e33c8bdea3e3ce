#pragma once

// Binary quadratic forms of negative discriminant, fundamental discriminants,
// class and genus numbers, and the Cornacchia norm-equation solvers.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ecpp {

/// The form A x^2 + B xy + C y^2.
struct QuadForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

/// A fundamental discriminant -D together with its prime discriminant
/// factorisation -D = q_1* ... q_t*, class number h and genus count g = 2^(t-1).
struct DiscriminantInfo {
  std::int64_t d = 0;
  std::vector<std::int64_t> factors;
  int t = 0;
  std::int64_t h = 0;
  std::int64_t g = 0;
};

/// Solution (x, y) of x^2 + d y^2 = p, or (U, V) of U^2 + D V^2 = 4N.
struct NormSolution {
  mpz_class x;
  mpz_class y;
};

/// True iff neg_d is a fundamental discriminant. Throws on neg_d >= 0.
bool is_fundamental(std::int64_t neg_d);

/// The prime discriminant attached to q: {(-1)^((q-1)/2) q} for odd q and
/// {-4, 8, -8} for q = 2. Throws PreconditionViolated on composite q.
std::vector<std::int64_t> prime_discriminants(std::uint64_t q);

/// All primitive reduced forms of discriminant -d, sorted by (A, B).
std::vector<QuadForm> reduced_forms(std::int64_t d);

bool is_reduced(const QuadForm& f);

std::int64_t class_number(std::int64_t d);

/// counts[D] = number of reduced forms (primitive or not) of discriminant -D
/// for D <= limit; equals h(-D) whenever -D is fundamental.
std::vector<std::uint16_t> reduced_form_counts(std::int64_t limit);
std::int64_t genus_count(std::int64_t d);

/// Factorisation of -d into prime discriminants. Requires -d fundamental.
std::vector<std::int64_t> prime_discriminant_factors(std::int64_t d);

DiscriminantInfo discriminant_info(std::int64_t d);

/// Memoised class numbers, safe to share between threads.
class ClassNumberCache {
 public:
  std::int64_t get(std::int64_t d);
  /// Precomputes every fundamental class number up to `limit` in one sweep.
  void fill_table(std::int64_t limit);

 private:
  std::mutex mutex_;
  std::shared_ptr<const std::vector<std::uint16_t>> table_;
  std::unordered_map<std::int64_t, std::int64_t> values_;
};

/// Cornacchia's half-gcd descent for x^2 + d y^2 = p given t^2 = -d mod p with
/// p/2 < t < p. With `word_size_trick` the cofactor recurrence runs modulo 2^32
/// and is replayed exactly only when the final test passes modulo 2^32.
std::optional<NormSolution> cornacchia(const mpz_class& d, const mpz_class& p,
                                       const mpz_class& t, bool word_size_trick = true);

/// Solves 4N = U^2 + D V^2 with U, V > 0 from root^2 = -D mod N. The descent
/// starts at (2N, x0) where x0 is root or N - root, whichever has the parity
/// of D, and stops at the first remainder <= sqrt(4N).
std::optional<NormSolution> solve_4n(std::int64_t d, const mpz_class& n, const mpz_class& root,
                                     bool word_size_trick = true);

/// Same as above, computing the square root itself; empty when (-D/N) != 1.
std::optional<NormSolution> solve_4n(std::int64_t d, const mpz_class& n);

}  // namespace ecpp
