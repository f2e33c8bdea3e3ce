#include "ecpp/quadratics.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <numeric>

#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"

namespace ecpp {
namespace {

bool is_small_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

// Runs the descent r_{i-2} = a_i r_{i-1} + r_i from (r0, r1) until the
// remainder drops to floor(sqrt(target)) or below, then checks
// r^2 + d w^2 = target.
std::optional<NormSolution> descend(const mpz_class& d, const mpz_class& r0, const mpz_class& r1,
                                    const mpz_class& target, bool word_size_trick) {
  mpz_class limit;
  mpz_sqrt(limit.get_mpz_t(), target.get_mpz_t());

  mpz_class prev = r0;
  mpz_class cur = r1;
  mpz_class quot, rem;

  if (word_size_trick) {
    std::uint32_t w_prev = 0;
    std::uint32_t w_cur = 1;
    while (cur > limit) {
      mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), prev.get_mpz_t(), cur.get_mpz_t());
      const auto a = static_cast<std::uint32_t>(mpz_get_ui(quot.get_mpz_t()));
      const std::uint32_t w_next = w_prev + a * w_cur;
      w_prev = w_cur;
      w_cur = w_next;
      mpz_swap(prev.get_mpz_t(), cur.get_mpz_t());
      mpz_swap(cur.get_mpz_t(), rem.get_mpz_t());
    }
    const auto r32 = static_cast<std::uint32_t>(mpz_get_ui(cur.get_mpz_t()));
    const auto d32 = static_cast<std::uint32_t>(mpz_get_ui(d.get_mpz_t()));
    const auto p32 = static_cast<std::uint32_t>(mpz_get_ui(target.get_mpz_t()));
    if (static_cast<std::uint32_t>(r32 * r32 + d32 * w_cur * w_cur) != p32) return std::nullopt;
    return descend(d, r0, r1, target, false);
  }

  mpz_class w_prev = 0;
  mpz_class w_cur = 1;
  mpz_class w_next;
  while (cur > limit) {
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), prev.get_mpz_t(), cur.get_mpz_t());
    w_next = w_prev + quot * w_cur;
    mpz_swap(w_prev.get_mpz_t(), w_cur.get_mpz_t());
    mpz_swap(w_cur.get_mpz_t(), w_next.get_mpz_t());
    mpz_swap(prev.get_mpz_t(), cur.get_mpz_t());
    mpz_swap(cur.get_mpz_t(), rem.get_mpz_t());
  }
  if (cur * cur + d * w_cur * w_cur != target) return std::nullopt;
  return NormSolution{cur, w_cur};
}

}  // namespace

bool is_fundamental(std::int64_t neg_d) {
  if (neg_d >= 0) throw PreconditionViolated("is_fundamental: discriminant must be negative");
  const std::int64_t d = -neg_d;
  std::int64_t odd = d;
  while (odd % 2 == 0) odd /= 2;
  for (std::int64_t p = 3; p * p <= odd; p += 2) {
    if (odd % (p * p) == 0) return false;
  }
  if (d % 4 == 3) return true;
  if (d % 4 == 0) {
    const std::int64_t r = (d / 4) % 4;
    return r == 1 || r == 2;
  }
  return false;
}

std::vector<std::int64_t> prime_discriminants(std::uint64_t q) {
  if (!is_small_prime(q)) throw PreconditionViolated("prime_discriminants: q must be prime");
  if (q == 2) return {-4, 8, -8};
  const auto s = static_cast<std::int64_t>(q);
  return {q % 4 == 1 ? s : -s};
}

bool is_reduced(const QuadForm& f) {
  if (std::abs(f.b) > f.a || f.a > f.c) return false;
  if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

std::vector<QuadForm> reduced_forms(std::int64_t d) {
  std::vector<QuadForm> forms;
  // A <= sqrt(D/3) for reduced forms.
  for (std::int64_t a = 1; 3 * a * a <= d; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - d) % 2) != 0) continue;
      const std::int64_t num = b * b + d;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      const QuadForm f{a, b, c};
      if (!is_reduced(f)) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      forms.push_back(f);
    }
  }
  std::sort(forms.begin(), forms.end());
  return forms;
}

std::int64_t class_number(std::int64_t d) {
  if (d <= 0) throw PreconditionViolated("class_number: D must be positive");
  // Imprimitive forms only exist for non-fundamental discriminants.
  const bool check_primitive = !is_fundamental(-d);
  std::int64_t h = 0;
  for (std::int64_t b = d % 2; 3 * b * b <= d; b += 2) {
    const std::int64_t ac = (b * b + d) / 4;
    for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      const std::int64_t c = ac / a;
      if (check_primitive && std::gcd(std::gcd(a, b), c) != 1) continue;
      // (a, -b, c) is reduced too unless b = 0, b = a or a = c.
      h += (b == 0 || b == a || a == c) ? 1 : 2;
    }
  }
  return h;
}

std::vector<std::uint16_t> reduced_form_counts(std::int64_t limit) {
  std::vector<std::uint16_t> counts(static_cast<std::size_t>(std::max<std::int64_t>(limit, 0)) + 1, 0);
  for (std::int64_t a = 1; 3 * a * a <= limit; ++a) {
    for (std::int64_t b = 0; b <= a; ++b) {
      // c runs from a upwards; D = 4ac - b^2 grows by 4a per step.
      std::int64_t disc = 4 * a * a - b * b;
      if (disc > limit) continue;
      const bool both_signs = b != 0 && b != a;
      // c = a admits only b >= 0.
      ++counts[static_cast<std::size_t>(disc)];
      const std::uint16_t step = both_signs ? 2 : 1;
      for (disc += 4 * a; disc <= limit; disc += 4 * a) counts[static_cast<std::size_t>(disc)] += step;
    }
  }
  return counts;
}

std::vector<std::int64_t> prime_discriminant_factors(std::int64_t d) {
  std::vector<std::int64_t> out;
  std::int64_t rest = d;
  std::int64_t odd_product = 1;
  while (rest % 2 == 0) rest /= 2;
  for (std::int64_t p = 3; p <= rest; p += 2) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    const std::int64_t q = (p % 4 == 1) ? p : -p;
    out.push_back(q);
    odd_product *= q;
    rest /= p;
    if (rest % p == 0) throw PreconditionViolated("discriminant is not fundamental");
  }
  if (d % 2 == 0) {
    // -d = e * odd_product with e in {-4, 8, -8}.
    const std::int64_t e = -d / odd_product;
    if (e != -4 && e != 8 && e != -8) throw PreconditionViolated("discriminant is not fundamental");
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](std::int64_t x, std::int64_t y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : x > y;
  });
  return out;
}

std::int64_t genus_count(std::int64_t d) {
  const auto t = prime_discriminant_factors(d).size();
  return std::int64_t{1} << (t - 1);
}

DiscriminantInfo discriminant_info(std::int64_t d) {
  DiscriminantInfo info;
  info.d = d;
  info.factors = prime_discriminant_factors(d);
  info.t = static_cast<int>(info.factors.size());
  info.h = class_number(d);
  info.g = std::int64_t{1} << (info.t - 1);
  return info;
}

void ClassNumberCache::fill_table(std::int64_t limit) {
  // One table per process, grown on demand and shared by every cache.
  static std::mutex shared_mutex;
  static std::shared_ptr<const std::vector<std::uint16_t>> shared;
  std::shared_ptr<const std::vector<std::uint16_t>> table;
  {
    std::lock_guard lock(shared_mutex);
    if (!shared || static_cast<std::int64_t>(shared->size()) - 1 < limit) {
      shared = std::make_shared<const std::vector<std::uint16_t>>(reduced_form_counts(limit));
    }
    table = shared;
  }
  std::lock_guard lock(mutex_);
  if (!table_ || table_->size() < table->size()) table_ = std::move(table);
}

std::int64_t ClassNumberCache::get(std::int64_t d) {
  {
    std::lock_guard lock(mutex_);
    if (table_ && d < static_cast<std::int64_t>(table_->size()) && is_fundamental(-d)) {
      return (*table_)[static_cast<std::size_t>(d)];
    }
    if (auto it = values_.find(d); it != values_.end()) return it->second;
  }
  const std::int64_t h = class_number(d);
  std::lock_guard lock(mutex_);
  values_.emplace(d, h);
  return h;
}

std::optional<NormSolution> cornacchia(const mpz_class& d, const mpz_class& p, const mpz_class& t,
                                       bool word_size_trick) {
  if (!(2 * t > p && t < p)) throw PreconditionViolated("cornacchia: need p/2 < t < p");
  if (mod(t * t + d, p) != 0) throw PreconditionViolated("cornacchia: t^2 != -d mod p");
  return descend(d, p, t, p, word_size_trick);
}

std::optional<NormSolution> solve_4n(std::int64_t d, const mpz_class& n, const mpz_class& root,
                                     bool word_size_trick) {
  const mpz_class dz(static_cast<long>(d));
  const mpz_class r = mod(root, n);
  if (mod(r * r + dz, n) != 0) throw PreconditionViolated("solve_4n: root^2 != -D mod N");
  if (n % 2 == 0) throw PreconditionViolated("solve_4n: N must be odd");
  const mpz_class x0 = (mpz_odd_p(r.get_mpz_t()) != 0) == (d % 2 != 0) ? r : n - r;
  auto sol = descend(dz, 2 * n, x0, 4 * n, word_size_trick);
  if (sol && sol->y == 0) return std::nullopt;
  return sol;
}

std::optional<NormSolution> solve_4n(std::int64_t d, const mpz_class& n) {
  const mpz_class neg_d(-static_cast<long>(d));
  if (jacobi(neg_d, n) != 1) return std::nullopt;
  return solve_4n(d, n, sqrt_mod(neg_d, n).value);
}

}  // namespace ecpp
