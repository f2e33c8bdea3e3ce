#include "ecpp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

#include "ecpp/certificate.hpp"
#include "ecpp/classpoly.hpp"
#include "ecpp/errors.hpp"
#include "ecpp/quadratics.hpp"

namespace ecpp::cli {
namespace {

struct Summary {
  double min = 0;
  double max = 0;
  double avg = 0;
  double std = 0;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0;
  for (double x : xs) sum += x;
  s.avg = sum / static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - s.avg) * (x - s.avg);
  s.std = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

void row(std::ostream& out, const std::string& name, const std::vector<double>& xs, int digits) {
  const Summary s = summarize(xs);
  out << name << std::fixed << std::setprecision(digits) << '\t' << s.min << '\t' << s.max << '\t' << s.avg << '\t'
      << s.std << '\n';
}

}  // namespace

mpz_class parse_number(const std::string& text) {
  static const std::regex decimal(R"(\s*(\d+)\s*)");
  static const std::regex power(R"(\s*(\d+)\s*\^\s*(\d+)\s*(?:([+-])\s*(\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, decimal)) return mpz_class(m[1].str(), 10);
  if (std::regex_match(text, m, power)) {
    const mpz_class base(m[1].str(), 10);
    const unsigned long exp = std::stoul(m[2].str());
    if (exp > 1'000'000) throw ParseError("exponent too large: " + m[2].str());
    mpz_class value;
    mpz_pow_ui(value.get_mpz_t(), base.get_mpz_t(), exp);
    if (m[3].matched) {
      const mpz_class c(m[4].str(), 10);
      value = m[3].str() == "+" ? mpz_class(value + c) : mpz_class(value - c);
    }
    return value;
  }
  throw ParseError("not a number or a^b+-c expression: '" + text + "'");
}

std::vector<mpz_class> random_primes(unsigned digits, std::size_t count, std::uint64_t seed) {
  if (digits < 2) throw PreconditionViolated("random_primes: need at least two digits");
  mpz_class lo;
  mpz_ui_pow_ui(lo.get_mpz_t(), 10, digits - 1);
  const mpz_class hi = lo * 10;
  std::mt19937_64 rng(seed);
  std::vector<mpz_class> out;
  while (out.size() < count) {
    mpz_class p = lo + random_below(rng, hi - lo);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (p < hi) out.push_back(p);
  }
  return out;
}

std::string bench_table(const std::vector<PhaseStats>& runs, const std::vector<double>& check_seconds) {
  std::ostringstream out;
  out << "phase\tmin\tmax\tavg\tstd\n";
  auto collect = [&](auto get) {
    std::vector<double> xs;
    for (const PhaseStats& s : runs) xs.push_back(static_cast<double>(get(s)));
    return xs;
  };
  row(out, "SQRT", collect([](const PhaseStats& s) { return s.sqrt.seconds; }), 4);
  row(out, "CORN", collect([](const PhaseStats& s) { return s.corn.seconds; }), 4);
  row(out, "EXTRACT", collect([](const PhaseStats& s) { return s.extract.seconds; }), 4);
  row(out, "PRP", collect([](const PhaseStats& s) { return s.prp.seconds; }), 4);
  row(out, "HD", collect([](const PhaseStats& s) { return s.hd.seconds; }), 4);
  row(out, "jmod", collect([](const PhaseStats& s) { return s.jmod.seconds; }), 4);
  row(out, "1st", collect([](const PhaseStats& s) { return s.first; }), 4);
  row(out, "2nd", collect([](const PhaseStats& s) { return s.second; }), 4);
  row(out, "total", collect([](const PhaseStats& s) { return s.total; }), 4);
  row(out, "check", check_seconds, 4);
  row(out, "nsteps", collect([](const PhaseStats& s) { return s.nsteps; }), 1);
  row(out, "certif", collect([](const PhaseStats& s) { return static_cast<double>(s.certificate_bytes) / 1024.0; }),
      2);
  std::vector<double> ds;
  std::vector<double> hs;
  for (const PhaseStats& s : runs) {
    for (auto d : s.step_d) ds.push_back(static_cast<double>(d));
    for (auto h : s.step_h) hs.push_back(static_cast<double>(h));
  }
  row(out, "D", ds, 1);
  row(out, "h", hs, 1);
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic curve primality proving"};
  app.require_subcommand(1);

  ProverConfig cfg;
  std::string n_text;
  std::string out_path;
  bool show_stats = false;
  auto* prove_cmd = app.add_subcommand("prove", "Prove N prime and write a certificate");
  prove_cmd->add_option("N", n_text, "Decimal integer or a^b+c / a^b-c")->required();
  prove_cmd->add_option("--dmax", cfg.d_max, "Largest discriminant |D|")->capture_default_str();
  prove_cmd->add_option("--hmax", cfg.h_max, "Largest class number")->capture_default_str();
  prove_cmd->add_option("--pool-size", cfg.pool_size_initial, "Initial square-root pool size (0 = auto)");
  prove_cmd->add_option("--smooth-bound", cfg.smooth_bound, "Smoothness bound B (0 = auto)");
  prove_cmd->add_option("--delta", cfg.delta, "Early-abort exponent")->capture_default_str();
  prove_cmd->add_option("--subset-size", cfg.max_subset_size, "Largest subset of pool primes")->capture_default_str();
  prove_cmd->add_option("--seed", cfg.rng_seed, "Random seed");
  prove_cmd->add_option("--threads", cfg.threads, "Worker threads for candidate evaluation")->capture_default_str();
  prove_cmd->add_flag("--strict-2n", cfg.strict_2n, "Only accept orders m = 2N'");
  prove_cmd->add_option("--out", out_path, "Certificate output file");
  prove_cmd->add_flag("--stats", show_stats, "Print phase timings");

  std::string in_path;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a certificate file");
  verify_cmd->add_option("--in", in_path, "Certificate file")->required();

  std::string d_text;
  std::string poly_out;
  auto* classpoly_cmd = app.add_subcommand("classpoly", "Compute H_D and write its cache file");
  classpoly_cmd->add_option("D", d_text, "Discriminant (sign ignored)")->required();
  classpoly_cmd->add_option("--out", poly_out, "Output file (default: cache directory or ./HD_<D>.txt)");

  unsigned digits = 30;
  std::size_t count = 5;
  std::uint64_t bench_seed = kDefaultSeed;
  auto* bench_cmd = app.add_subcommand("bench", "Prove random primes and print phase statistics");
  bench_cmd->add_option("--digits", digits, "Decimal digits")->capture_default_str();
  bench_cmd->add_option("--count", count, "Number of primes")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*prove_cmd) {
      const mpz_class n = parse_number(n_text);
      Prover prover(cfg);
      Certificate cert;
      try {
        cert = prover.prove(n);
      } catch (const CompositeDetected& e) {
        out << "composite";
        if (e.factor() != 0) out << " factor=" << e.factor().get_str();
        out << " (" << e.witness() << ")\n";
        return 2;
      }
      if (!out_path.empty()) {
        write_certificate_file(cert, out_path);
      }
      out << "prime steps=" << cert.steps.size() << '\n';
      if (show_stats) out << bench_table({prover.stats()}, {});
      return 0;
    }
    if (*verify_cmd) {
      const Certificate cert = read_certificate_file(in_path);
      const Verdict v = verify_chain(cert);
      if (v) {
        out << "valid N=" << cert.n().get_str() << '\n';
        return 0;
      }
      out << "invalid: " << v.reason << '\n';
      return 2;
    }
    if (*classpoly_cmd) {
      std::int64_t d = std::stoll(d_text);
      d = d < 0 ? -d : d;
      if (d <= 0 || !is_fundamental(-d)) {
        err << "error: -" << d << " is not a fundamental discriminant\n";
        return 1;
      }
      const ClassPolynomial poly = hilbert_class_poly(d);
      std::filesystem::path path;
      if (!poly_out.empty()) {
        path = poly_out;
      } else if (auto dir = ClassPolyCache::environment_directory()) {
        std::filesystem::create_directories(*dir);
        path = *dir / class_poly_filename(d);
      } else {
        path = class_poly_filename(d);
      }
      std::ofstream file(path);
      file << format_class_poly(poly);
      if (!file) throw EcppError("cannot write " + path.string());
      out << "wrote " << path.string() << " (degree " << poly.degree() << ")\n";
      return 0;
    }
    if (*bench_cmd) {
      auto cache = ClassPolyCache::from_environment();
      std::vector<PhaseStats> runs;
      std::vector<double> checks;
      for (const mpz_class& p : random_primes(digits, count, bench_seed)) {
        Prover prover(cfg, cache);
        const Certificate cert = prover.prove(p);
        const auto start = std::chrono::steady_clock::now();
        const Verdict v = verify_chain(cert);
        checks.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (!v) {
          err << "error: certificate for " << p.get_str() << " rejected: " << v.reason << '\n';
          return 1;
        }
        runs.push_back(prover.stats());
      }
      out << bench_table(runs, checks);
      return 0;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ecpp::cli
