#pragma once

// Primality certificates: data model, text format and a verifier that relies
// on nothing but modular and curve arithmetic.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace ecpp {

enum class StepKind { kEcpp, kLeaf };

/// One link of the chain. For kEcpp all fields are set and certify N given
/// that Nprime is prime: 4N = U^2 + D V^2, m = N + 1 - U = c * Nprime, and
/// (x, y) lies on y^2 = x^3 + ax + b. A kLeaf step only carries N.
struct CertStep {
  StepKind kind = StepKind::kEcpp;
  mpz_class n;
  std::int64_t d = 0;
  mpz_class u;
  mpz_class v;
  mpz_class m;
  mpz_class c;
  mpz_class nprime;
  mpz_class a;
  mpz_class b;
  mpz_class x;
  mpz_class y;

  static CertStep leaf(const mpz_class& n);
  friend bool operator==(const CertStep&, const CertStep&) = default;
};

struct Certificate {
  std::vector<CertStep> steps;

  const mpz_class& n() const { return steps.front().n; }
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Verdict {
  bool ok = false;
  std::string reason;

  explicit operator bool() const { return ok; }
  static Verdict pass() { return {true, {}}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

/// Leaves must lie below this bound and are checked by trial division.
inline constexpr std::uint64_t kLeafBound = 1ULL << 32;

Verdict verify_step(const CertStep& step);
Verdict verify_chain(const Certificate& cert);

std::string serialize(const Certificate& cert);
/// Strict parser for the text produced by serialize(); throws ParseError.
Certificate parse_certificate(const std::string& text);

Certificate read_certificate_file(const std::string& path);
void write_certificate_file(const Certificate& cert, const std::string& path);

}  // namespace ecpp
