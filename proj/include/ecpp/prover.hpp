#pragma once

// The ECPP descent: candidate discriminants from a pool of square roots,
// norm equations, sieved orders, CM curves and the order check, repeated on
// the cofactor N' until it drops below the leaf bound.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "ecpp/certificate.hpp"
#include "ecpp/classpoly.hpp"
#include "ecpp/modarith.hpp"
#include "ecpp/quadratics.hpp"
#include "ecpp/sieve.hpp"

namespace ecpp {

struct ProverConfig {
  std::int64_t d_max = 1'000'000;
  std::int64_t h_max = 200;
  /// Initial pool size r; 0 picks one from the size of N.
  std::size_t pool_size_initial = 0;
  /// Smoothness bound B; 0 uses default_smooth_bound of the input N.
  std::uint32_t smooth_bound = 0;
  unsigned delta = 12;
  int max_subset_size = 2;
  int prp_rounds = kDefaultPrpRounds;
  std::uint64_t rng_seed = kDefaultSeed;
  mpz_class small_threshold = mpz_class(1) << 32;
  /// Only accept m = 2 N' (the c = 2 case of the order criterion).
  bool strict_2n = false;
  unsigned threads = 1;
  /// Compare every updated sieve table against a direct recomputation.
  bool verify_table_updates = false;
  /// Curves tried per root and points tried per curve.
  int points_per_curve = 5;

  /// Throws PreconditionViolated on out-of-range values.
  void validate() const;
};

struct PhaseTimer {
  double seconds = 0;
  std::uint64_t calls = 0;
};

struct PhaseStats {
  PhaseTimer sqrt;
  PhaseTimer corn;
  PhaseTimer extract;
  PhaseTimer prp;
  PhaseTimer hd;
  PhaseTimer jmod;
  /// find_point and order_check.
  PhaseTimer curve;
  /// Building phase (candidates, norm equations, orders) and the rest.
  double first = 0;
  double second = 0;
  double total = 0;
  std::size_t nsteps = 0;
  std::size_t certificate_bytes = 0;
  std::vector<std::int64_t> step_d;
  std::vector<std::int64_t> step_h;
  std::uint64_t candidates_tried = 0;
  std::uint64_t pool_growths = 0;
  std::uint64_t curves_rejected = 0;
  std::uint64_t table_checks = 0;
  std::uint64_t table_mismatches = 0;
};

class Prover {
 public:
  /// Without a cache the prover uses one configured from ECPP_HD_CACHE.
  explicit Prover(ProverConfig config = {}, std::shared_ptr<ClassPolyCache> cache = nullptr);

  /// Full certificate for N. Throws CompositeDetected on arithmetic evidence
  /// and ResourceExhausted when the candidate space runs out.
  Certificate prove(const mpz_class& n);

  /// One level of the descent with a freshly built sieve table. Returns a leaf
  /// step (and N' = 0) when N is below the leaf bound.
  std::pair<CertStep, mpz_class> step_once(const mpz_class& n);

  const PhaseStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  const ProverConfig& config() const { return config_; }
  ClassPolyCache& class_polys() { return *polys_; }

 private:
  CertStep leaf_step(const mpz_class& n);
  CertStep descend(const mpz_class& n, const SieveTable& table, std::size_t level);

  ProverConfig config_;
  std::shared_ptr<ClassPolyCache> polys_;
  ClassNumberCache class_numbers_;
  PhaseStats stats_;
};

/// Convenience wrapper around Prover.
Certificate prove(const mpz_class& n, const ProverConfig& config = {}, PhaseStats* stats = nullptr);

/// Initial pool size used when ProverConfig::pool_size_initial is 0.
std::size_t default_pool_size(const mpz_class& n);

}  // namespace ecpp
