#pragma once

// Candidate discriminants built from a pool of square roots of small prime
// discriminants modulo N.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ecpp/quadratics.hpp"

namespace ecpp {

struct PoolEntry {
  std::int64_t qstar = 0;
  mpz_class root;  // root^2 = qstar mod N
};

struct SquareRootPool {
  mpz_class n;
  std::vector<PoolEntry> entries;
  /// Next |q*| to examine when the pool is extended.
  std::int64_t scan_from = 3;
};

struct CandidateD {
  DiscriminantInfo info;
  mpz_class sqrt_d;  // sqrt_d^2 = -D mod N
};

/// The r prime discriminants of smallest absolute value with (q*/N) = 1, each
/// with its square root. Throws CompositeDetected when a root cannot be taken.
SquareRootPool build_pool(const mpz_class& n, std::size_t r);

/// Appends entries until the pool holds r of them.
void extend_pool(SquareRootPool& pool, std::size_t r);

struct CombineOptions {
  int max_subset_size = 2;
  std::int64_t d_max = std::numeric_limits<std::int64_t>::max();
  ClassNumberCache* class_numbers = nullptr;
  /// Only subsets containing an entry at index >= first_new are returned, so
  /// a grown pool can be combined incrementally.
  std::size_t first_new = 0;
};

/// Every subset of at most `max_subset_size` entries whose product is a
/// negative fundamental discriminant -D <= d_max, with sqrt(-D) taken as the
/// product of the member roots.
std::vector<CandidateD> combine(const SquareRootPool& pool, const CombineOptions& options = {});

/// Keeps h <= h_max, sorts by (h/g, h, D) and truncates at the shortest prefix
/// with sum g/h >= budget.
std::vector<CandidateD> schedule(std::vector<CandidateD> candidates, const mpq_class& budget,
                                 std::int64_t h_max = std::numeric_limits<std::int64_t>::max());

/// Expected number of splitting discriminants needed with smoothness bound B:
/// t/2 where t = exp(-gamma) log N / log B.
double discriminant_budget(const mpz_class& n, std::uint64_t smooth_bound);

}  // namespace ecpp
