#include "ecpp/prover.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <thread>

#include "ecpp/curve.hpp"
#include "ecpp/errors.hpp"
#include "ecpp/polyroot.hpp"
#include "ecpp/pool.hpp"

namespace ecpp {
namespace {

using Clock = std::chrono::steady_clock;

// Largest D covered by the one-sweep class number table.
constexpr std::int64_t kClassTableLimit = 2'000'000;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class ScopedTimer {
 public:
  explicit ScopedTimer(PhaseTimer& t) : timer_(t), start_(Clock::now()) { ++timer_.calls; }
  ~ScopedTimer() { timer_.seconds += seconds_since(start_); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  PhaseTimer& timer_;
  Clock::time_point start_;
};

void merge(PhaseTimer& into, const PhaseTimer& from) {
  into.seconds += from.seconds;
  into.calls += from.calls;
}

// splitmix64, used to derive independent seeds for each random draw.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = mix(mix(base ^ mix(a)) ^ mix(b + 0x51ed));
  return s == 0 ? 1 : s;
}

// A candidate order that passed the sieve, the bounds and the PRP test.
struct OrderHit {
  mpz_class u;  // signed, m = N + 1 - u
  FactorResult factors;
};

struct Evaluation {
  std::optional<NormSolution> uv;
  std::vector<OrderHit> hits;
  PhaseTimer corn;
  PhaseTimer extract;
  PhaseTimer prp;
};

}  // namespace

void ProverConfig::validate() const {
  if (d_max < 4) throw PreconditionViolated("ProverConfig: d_max must be at least 4");
  if (h_max < 1) throw PreconditionViolated("ProverConfig: h_max must be at least 1");
  if (small_threshold < (mpz_class(1) << 32)) {
    throw PreconditionViolated("ProverConfig: small_threshold must be at least 2^32");
  }
  if (smooth_bound == 1) throw PreconditionViolated("ProverConfig: smooth bound must be 0 or at least 2");
  if (max_subset_size < 1) throw PreconditionViolated("ProverConfig: subset size must be positive");
  if (prp_rounds < 1) throw PreconditionViolated("ProverConfig: prp_rounds must be positive");
  if (threads < 1) throw PreconditionViolated("ProverConfig: threads must be positive");
  if (points_per_curve < 1) throw PreconditionViolated("ProverConfig: points_per_curve must be positive");
}

std::size_t default_pool_size(const mpz_class& n) {
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  return std::max<std::size_t>(10, bits / 12);
}

Prover::Prover(ProverConfig config, std::shared_ptr<ClassPolyCache> cache)
    : config_(std::move(config)), polys_(std::move(cache)) {
  config_.validate();
  if (!polys_) polys_ = ClassPolyCache::from_environment();
}

CertStep Prover::leaf_step(const mpz_class& n) {
  if (!is_prime_trial_division(n)) {
    mpz_class f = 2;
    while (n % f != 0) ++f;
    throw CompositeDetected(n, f == n ? mpz_class(0) : f, "trial division");
  }
  return CertStep::leaf(n);
}

namespace {

Evaluation evaluate(const CandidateD& cand, const mpz_class& n, const SieveTable& table, const ProverConfig& cfg,
                    const mpz_class& small_threshold, std::uint64_t prp_seed) {
  Evaluation ev;
  const std::int64_t d = cand.info.d;
  {
    ScopedTimer t(ev.corn);
    ev.uv = solve_4n(d, n, cand.sqrt_d);
  }
  if (!ev.uv) return ev;
  const mpz_class& u = ev.uv->x;
  std::vector<std::pair<mpz_class, FactorResult>> orders;
  {
    ScopedTimer t(ev.extract);
    const SieveHits hits = sieve_m(u, table, d);
    const mpz_class signs[2] = {u, -u};
    const std::vector<std::uint32_t>* lists[2] = {&hits.minus, &hits.plus};
    for (int s = 0; s < 2; ++s) {
      const mpz_class m = n + 1 - signs[s];
      FactorResult fr;
      if (cfg.strict_2n) {
        if (m % 4 != 2) continue;
        fr.c = 2;
        fr.nprime = m / 2;
        fr.factors = {{2u, 1u}};
      } else {
        try {
          fr = extract_cofactor(m, *lists[s]);
        } catch (const FullySmooth&) {
          continue;
        }
        if (!early_abort_ok(n, fr.nprime, cfg.delta)) continue;
      }
      if (!exceeds_quartic_bound(n, fr.nprime)) continue;
      orders.emplace_back(signs[s], std::move(fr));
    }
  }
  std::sort(orders.begin(), orders.end(),
            [](const auto& x, const auto& y) { return x.second.nprime < y.second.nprime; });
  for (auto& [su, fr] : orders) {
    ScopedTimer t(ev.prp);
    const bool prime = fr.nprime < small_threshold ? is_prime_trial_division(fr.nprime)
                                                   : is_probable_prime(fr.nprime, cfg.prp_rounds, prp_seed);
    if (prime) ev.hits.push_back({su, std::move(fr)});
  }
  return ev;
}

}  // namespace

CertStep Prover::descend(const mpz_class& n, const SieveTable& table, std::size_t level) {
  const auto level_start = Clock::now();
  double second = 0;
  struct Finish {
    PhaseStats& stats;
    Clock::time_point start;
    double& second;
    ~Finish() {
      const double all = seconds_since(start);
      stats.second += second;
      stats.first += all - second;
    }
  } finish{stats_, level_start, second};

  class_numbers_.fill_table(std::min<std::int64_t>(config_.d_max, kClassTableLimit));
  std::size_t r = config_.pool_size_initial != 0 ? config_.pool_size_initial : default_pool_size(n);
  SquareRootPool pool = [&] {
    ScopedTimer t(stats_.sqrt);
    return build_pool(n, r);
  }();
  mpq_class budget(discriminant_budget(n, table.bound));
  std::set<std::int64_t> tried;
  std::uint64_t attempt = 0;

  CombineOptions options;
  options.max_subset_size = config_.max_subset_size;
  options.d_max = config_.d_max;
  options.class_numbers = &class_numbers_;

  // Steps 2-4 for one discriminant; empty when no curve passes.
  auto build_step = [&](const CandidateD& cand, const Evaluation& ev) -> std::optional<CertStep> {
    const auto start = Clock::now();
    struct Acc {
      double& second;
      Clock::time_point start;
      ~Acc() { second += seconds_since(start); }
    } acc{second, start};

    const std::int64_t d = cand.info.d;
    const ClassPolynomial* hd = nullptr;
    {
      ScopedTimer t(stats_.hd);
      hd = &polys_->get(d);
    }
    mpz_class root;
    {
      ScopedTimer t(stats_.jmod);
      const PolyModN h(hd->coeffs, n);
      try {
        root = find_root(h, derive_seed(config_.rng_seed, level, 0x100000 + attempt)).value;
      } catch (const NoRoot&) {
        throw CompositeDetected(n, 0, "H_D has no root modulo N although 4N = U^2 + D V^2");
      }
    }
    ScopedTimer t(stats_.curve);
    std::vector<CurveModN> curves;
    try {
      curves = curve_from_j(root, n);
    } catch (const SingularCurve& e) {
      throw CompositeDetected(n, e.divisor(), "singular CM curve");
    }
    for (const OrderHit& hit : ev.hits) {
      for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const CurveModN& e = curves[ci];
        for (int pi = 0; pi < config_.points_per_curve; ++pi) {
          ProjPoint p;
          try {
            p = find_point(e, pi == 0 ? 0 : derive_seed(config_.rng_seed, level, (attempt << 16) + ci * 64 + pi));
          } catch (const NoPointFound&) {
            break;
          }
          const OrderCheck res = order_check(hit.factors.c, hit.factors.nprime, e, p);
          if (res == OrderCheck::kCofactorAnnihilates) continue;
          if (res == OrderCheck::kOrderMismatch) break;
          CertStep s;
          s.kind = StepKind::kEcpp;
          s.n = n;
          s.d = d;
          s.u = hit.u;
          s.v = ev.uv->y;
          s.m = n + 1 - hit.u;
          s.c = hit.factors.c;
          s.nprime = hit.factors.nprime;
          s.a = e.a;
          s.b = e.b;
          s.x = p.x;
          s.y = p.y;
          return s;
        }
      }
    }
    ++stats_.curves_rejected;
    return std::nullopt;
  };

  const std::size_t batch = std::max(1u, config_.threads);
  std::vector<CandidateD> pending;
  std::size_t combined = 0;
  auto refresh = [&] {
    options.first_new = combined;
    for (CandidateD& c : combine(pool, options)) {
      if (c.info.h <= config_.h_max) pending.push_back(std::move(c));
    }
    combined = pool.entries.size();
  };
  auto can_grow = [&] { return pool.scan_from <= config_.d_max; };
  const std::size_t increment = std::max<std::size_t>(4, r / 2);
  auto grow = [&] {
    r += increment;
    ScopedTimer t(stats_.sqrt);
    extend_pool(pool, r);
    ++stats_.pool_growths;
  };
  auto pending_weight = [&] {
    mpq_class sum = 0;
    for (const CandidateD& c : pending) {
      mpq_class w(mpz_class(static_cast<long>(c.info.g)), mpz_class(static_cast<long>(c.info.h)));
      w.canonicalize();
      sum += w;
    }
    return sum;
  };

  refresh();
  for (;;) {
    // Grow the pool until the untried discriminants carry the expected weight.
    while (can_grow() && pending_weight() < budget) {
      grow();
      refresh();
    }
    if (pending.empty()) {
      throw ResourceExhausted("no usable discriminant up to d_max = " + std::to_string(config_.d_max) +
                              " with h <= " + std::to_string(config_.h_max));
    }
    const std::vector<CandidateD> sched = schedule(pending, budget, config_.h_max);

    for (std::size_t begin = 0; begin < sched.size(); begin += batch) {
      const std::size_t end = std::min(sched.size(), begin + batch);
      std::vector<Evaluation> evs(end - begin);
      std::vector<std::uint64_t> seeds(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        seeds[i - begin] = derive_seed(config_.rng_seed, level, attempt + (i - begin));
      }
      if (batch == 1) {
        evs[0] = evaluate(sched[begin], n, table, config_, config_.small_threshold, seeds[0]);
      } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
          workers.emplace_back([&, i] {
            try {
              evs[i - begin] = evaluate(sched[i], n, table, config_, config_.small_threshold, seeds[i - begin]);
            } catch (...) {
              errors[i - begin] = std::current_exception();
            }
          });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
      }
      for (std::size_t i = begin; i < end; ++i) {
        const Evaluation& ev = evs[i - begin];
        merge(stats_.corn, ev.corn);
        merge(stats_.extract, ev.extract);
        merge(stats_.prp, ev.prp);
      }
      for (std::size_t i = begin; i < end; ++i) {
        ++stats_.candidates_tried;
        ++attempt;
        tried.insert(sched[i].info.d);
        const Evaluation& ev = evs[i - begin];
        if (ev.hits.empty()) continue;
        if (auto step = build_step(sched[i], ev)) return *step;
      }
    }

    std::erase_if(pending, [&](const CandidateD& c) { return tried.count(c.info.d) != 0; });
    if (can_grow()) {
      grow();
      refresh();
    }
  }
}

Certificate Prover::prove(const mpz_class& n) {
  const auto start = Clock::now();
  if (n < 2) throw PreconditionViolated("prove: N must be at least 2");
  Certificate cert;
  if (n < config_.small_threshold) {
    cert.steps.push_back(leaf_step(n));
  } else {
    {
      ScopedTimer t(stats_.prp);
      if (!is_probable_prime(n, config_.prp_rounds, config_.rng_seed)) {
        throw CompositeDetected(n, 0, "Miller-Rabin");
      }
    }
    const std::uint32_t bound = config_.smooth_bound != 0 ? config_.smooth_bound : default_smooth_bound(n);
    SieveTable table = residue_table(n, bound);
    mpz_class cur = n;
    std::size_t level = 0;
    while (cur >= config_.small_threshold) {
      CertStep step = descend(cur, table, level);
      stats_.step_d.push_back(step.d);
      stats_.step_h.push_back(class_numbers_.get(step.d));
      SieveTable next = update_table(table, step.u, step.c, step.nprime);
      if (config_.verify_table_updates) {
        ++stats_.table_checks;
        if (next != residue_table(step.nprime, bound)) ++stats_.table_mismatches;
      }
      table = std::move(next);
      cur = step.nprime;
      cert.steps.push_back(std::move(step));
      ++level;
    }
    cert.steps.push_back(leaf_step(cur));
  }
  stats_.nsteps += cert.steps.size();
  stats_.certificate_bytes += serialize(cert).size();
  stats_.total += seconds_since(start);
  return cert;
}

std::pair<CertStep, mpz_class> Prover::step_once(const mpz_class& n) {
  if (n < 2) throw PreconditionViolated("step_once: N must be at least 2");
  if (n < config_.small_threshold) return {leaf_step(n), mpz_class(0)};
  if (!is_probable_prime(n, config_.prp_rounds, config_.rng_seed)) throw CompositeDetected(n, 0, "Miller-Rabin");
  const std::uint32_t bound = config_.smooth_bound != 0 ? config_.smooth_bound : default_smooth_bound(n);
  CertStep step = descend(n, residue_table(n, bound), 0);
  mpz_class next = step.nprime;
  return {std::move(step), std::move(next)};
}

Certificate prove(const mpz_class& n, const ProverConfig& config, PhaseStats* stats) {
  Prover prover(config, ClassPolyCache::from_environment());
  Certificate cert = prover.prove(n);
  if (stats != nullptr) *stats = prover.stats();
  return cert;
}

}  // namespace ecpp
