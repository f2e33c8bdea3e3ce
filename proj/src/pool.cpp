#include "ecpp/pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"

namespace ecpp {
namespace {

bool is_small_prime(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

// Prime discriminants with |q*| == m, in scan order (8 before -8).
std::vector<std::int64_t> discriminants_of_size(std::int64_t m) {
  if (m == 4) return {-4};
  if (m == 8) return {8, -8};
  if (m % 2 == 1 && is_small_prime(m)) return {m % 4 == 1 ? m : -m};
  return {};
}

}  // namespace

SquareRootPool build_pool(const mpz_class& n, std::size_t r) {
  if (n <= 3 || mpz_even_p(n.get_mpz_t())) {
    throw PreconditionViolated("build_pool: N must be odd and greater than 3");
  }
  SquareRootPool pool{n, {}, 3};
  extend_pool(pool, r);
  return pool;
}

void extend_pool(SquareRootPool& pool, std::size_t r) {
  const mpz_class& n = pool.n;
  while (pool.entries.size() < r) {
    const std::int64_t size = pool.scan_from;
    for (std::int64_t q : discriminants_of_size(size)) {
      if (pool.entries.size() >= r) {
        // 8 was taken but -8 does not fit; resume at -8 next time.
        return;
      }
      if (std::any_of(pool.entries.begin(), pool.entries.end(),
                      [q](const PoolEntry& e) { return e.qstar == q; })) {
        continue;
      }
      const mpz_class qz(static_cast<long>(q));
      const int symbol = jacobi(qz, n);
      if (symbol == 0) {
        if (n == std::abs(q)) continue;
        throw CompositeDetected(n, mpz_class(static_cast<long>(std::abs(q))),
                                "shares a factor with a pool prime");
      }
      if (symbol != 1) continue;
      try {
        pool.entries.push_back({q, sqrt_mod(qz, n).value});
      } catch (const AlgorithmFailure& e) {
        throw CompositeDetected(n, 0, std::string("square root failed: ") + e.what());
      }
    }
    ++pool.scan_from;
  }
}

std::vector<CandidateD> combine(const SquareRootPool& pool, const CombineOptions& options) {
  std::vector<CandidateD> out;
  const auto& entries = pool.entries;
  const mpz_class& n = pool.n;
  const int max_size = std::max(1, options.max_subset_size);

  std::vector<std::size_t> members;
  // Depth-first enumeration of subsets in index order. A product of distinct
  // prime discriminants is fundamental as soon as at most one of them is even.
  std::function<void(std::size_t, std::int64_t, int, bool)> walk = [&](std::size_t start, std::int64_t product,
                                                                     int evens, bool has_new) {
    for (std::size_t i = start; i < entries.size(); ++i) {
      const std::int64_t q = entries[i].qstar;
      const std::int64_t next = product * q;
      if (std::abs(next) > options.d_max) {
        // Entries are ordered by |q*|, so every later one is larger too.
        break;
      }
      const int next_evens = evens + (q % 2 == 0 ? 1 : 0);
      if (next_evens > 1) continue;
      const bool next_new = has_new || i >= options.first_new;
      members.push_back(i);
      if (next < 0 && next_new) {
        const std::int64_t d = -next;
        CandidateD cand;
        cand.info.d = d;
        cand.sqrt_d = 1;
        for (std::size_t k : members) {
          cand.info.factors.push_back(entries[k].qstar);
          cand.sqrt_d = cand.sqrt_d * entries[k].root % n;
        }
        cand.info.t = static_cast<int>(members.size());
        cand.info.h = options.class_numbers ? options.class_numbers->get(d) : class_number(d);
        cand.info.g = std::int64_t{1} << (cand.info.t - 1);
        out.push_back(std::move(cand));
      }
      if (static_cast<int>(members.size()) < max_size) walk(i + 1, next, next_evens, next_new);
      members.pop_back();
    }
  };
  walk(0, 1, 0, false);
  return out;
}

std::vector<CandidateD> schedule(std::vector<CandidateD> candidates, const mpq_class& budget,
                                 std::int64_t h_max) {
  std::erase_if(candidates, [h_max](const CandidateD& c) { return c.info.h > h_max; });
  std::sort(candidates.begin(), candidates.end(), [](const CandidateD& x, const CandidateD& y) {
    // h_x/g_x vs h_y/g_y compared exactly.
    const std::int64_t lhs = x.info.h * y.info.g;
    const std::int64_t rhs = y.info.h * x.info.g;
    if (lhs != rhs) return lhs < rhs;
    if (x.info.h != y.info.h) return x.info.h < y.info.h;
    return x.info.d < y.info.d;
  });
  mpq_class sum = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    mpq_class weight(mpz_class(static_cast<long>(candidates[i].info.g)),
                     mpz_class(static_cast<long>(candidates[i].info.h)));
    weight.canonicalize();
    sum += weight;
    if (sum >= budget) {
      candidates.resize(i + 1);
      break;
    }
  }
  return candidates;
}

double discriminant_budget(const mpz_class& n, std::uint64_t smooth_bound) {
  constexpr double kEulerGamma = 0.57721566490153286061;
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, n.get_mpz_t());
  const double log_n = std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
  const double t = std::exp(-kEulerGamma) * log_n / std::log(static_cast<double>(smooth_bound));
  return t / 2.0;
}

}  // namespace ecpp
