#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "ecpp/certificate.hpp"
#include "ecpp/curve.hpp"
#include "ecpp/errors.hpp"
#include "ecpp/prover.hpp"
#include "oracles.hpp"

using ecpp::Certificate;
using ecpp::CertStep;

namespace {

const Certificate& sample() {
  static const Certificate cert = ecpp::prove(mpz_class("618970019642690137449562111"));  // 2^89 - 1
  return cert;
}

}  // namespace

TEST_CASE("a prover certificate verifies step by step") {
  const auto& cert = sample();
  REQUIRE(cert.steps.size() >= 2);
  CHECK(ecpp::verify_chain(cert));
  for (const auto& s : cert.steps) CHECK(ecpp::verify_step(s));
}

TEST_CASE("leaf steps") {
  CHECK(ecpp::verify_step(CertStep::leaf(10007)));
  CHECK_FALSE(ecpp::verify_step(CertStep::leaf(10001)));
  CHECK_FALSE(ecpp::verify_step(CertStep::leaf(mpz_class(1) << 33)));
  CHECK(ecpp::verify_chain(Certificate{{CertStep::leaf(10007)}}));
}

TEST_CASE("verify_step rejects mutated fields") {
  const CertStep good = sample().steps.front();
  auto mutated = [&](auto change) {
    CertStep s = good;
    change(s);
    return static_cast<bool>(ecpp::verify_step(s));
  };
  CHECK_FALSE(mutated([](CertStep& s) { s.u = -s.u; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.m = s.n + 1 + s.u; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.n += 2; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.d += 1; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.v += 1; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.c += 1; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.nprime += 1; }));
  CHECK_FALSE(mutated([](CertStep& s) { s.a = ecpp::mod(s.a + 1, s.n); }));
  CHECK_FALSE(mutated([](CertStep& s) { s.b = ecpp::mod(s.b + 1, s.n); }));
  CHECK_FALSE(mutated([](CertStep& s) { s.x = ecpp::mod(s.x + 1, s.n); }));
  CHECK_FALSE(mutated([](CertStep& s) { s.y = ecpp::mod(s.y + 1, s.n); }));
  CHECK_FALSE(mutated([](CertStep& s) { s.kind = ecpp::StepKind::kLeaf; }));
}

TEST_CASE("the quartic bound is enforced") {
  // A consistent step whose N' is too small: pick c = m / N' for a small
  // prime factor N' of m, if one exists, else fake it with N' = 1.
  CertStep s = sample().steps.front();
  s.nprime = 2;
  s.c = s.m / 2;
  if (s.c * 2 == s.m) CHECK_FALSE(ecpp::verify_step(s));
  s.nprime = 1;
  s.c = s.m;
  CHECK_FALSE(ecpp::verify_step(s));
}

TEST_CASE("chain structure") {
  Certificate cert = sample();
  Certificate deleted = cert;
  deleted.steps.erase(deleted.steps.begin() + (deleted.steps.size() > 2 ? 1 : 0));
  CHECK_FALSE(ecpp::verify_chain(deleted));

  Certificate reordered = cert;
  std::swap(reordered.steps.front(), reordered.steps.back());
  CHECK_FALSE(ecpp::verify_chain(reordered));

  Certificate no_leaf = cert;
  no_leaf.steps.pop_back();
  CHECK_FALSE(ecpp::verify_chain(no_leaf));

  CHECK_FALSE(ecpp::verify_chain(Certificate{}));
}

TEST_CASE("serialisation round trip") {
  const auto& cert = sample();
  const std::string text = ecpp::serialize(cert);
  CHECK(text.rfind("ECPP-CERT 1\nSTEP\nN=618970019642690137449562111\n", 0) == 0);
  CHECK(ecpp::parse_certificate(text) == cert);

  const auto path = std::filesystem::temp_directory_path() / "ecpp_unit_cert.txt";
  ecpp::write_certificate_file(cert, path.string());
  CHECK(ecpp::read_certificate_file(path.string()) == cert);
  std::filesystem::remove(path);
}

TEST_CASE("a tampered digit still parses but no longer verifies") {
  std::string text = ecpp::serialize(sample());
  const auto at = text.find("x=") + 2;
  text[at] = text[at] == '1' ? '2' : '1';
  const auto cert = ecpp::parse_certificate(text);
  CHECK_FALSE(ecpp::verify_chain(cert));
}

TEST_CASE("malformed input is a parse error") {
  CHECK_THROWS_AS(ecpp::parse_certificate(""), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::parse_certificate("ECPP-CERT 1\n"), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::parse_certificate("ECPP-CERT 2\nLEAF\nN=7\n"), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::parse_certificate("ECPP-CERT 1\nLEAF\nN=7x\n"), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::parse_certificate("ECPP-CERT 1\nSTEP\nN=7\nD=3\n"), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::parse_certificate("ECPP-CERT 1\nNODE\n"), ecpp::ParseError);
  CHECK_THROWS_AS(ecpp::read_certificate_file("/nonexistent/cert.txt"), ecpp::ParseError);
}

TEST_CASE("no step with a composite N verifies at toy scale") {
  // Exhaustive over small composites: every U with |U| < 2 sqrt(N), V = 1,
  // every prime N' | m above the quartic bound, every curve with the first
  // admissible point. None of these may be accepted.
  int attempts = 0;
  int accepted = 0;
  for (long n : {25L, 35L, 49L, 55L, 65L, 77L, 85L}) {
    for (long u = -2 * static_cast<long>(std::sqrt(n)); u * u < 4 * n; ++u) {
      const long d = 4 * n - u * u;
      const long m = n + 1 - u;
      for (long np = 2; np <= m; ++np) {
        if (m % np != 0 || !oracle::is_prime(static_cast<std::uint64_t>(np))) continue;
        if (!ecpp::exceeds_quartic_bound(n, np)) continue;
        for (long a = 0; a < n; ++a) {
          for (long b = 0; b < n; ++b) {
            if (std::gcd(((4 * a * a * a + 27 * b * b) % n), n) != 1) continue;
            for (long x = 0; x < n; ++x) {
              long y = 1;
              while (y < n && (y * y - x * x * x - a * x - b) % n != 0) ++y;
              if (y == n || std::gcd(y, n) != 1) continue;
              CertStep s;
              s.n = n;
              s.d = d;
              s.u = u;
              s.v = 1;
              s.m = m;
              s.c = m / np;
              s.nprime = np;
              s.a = a;
              s.b = b;
              s.x = x;
              s.y = y;
              ++attempts;
              if (ecpp::verify_step(s)) ++accepted;
              break;
            }
          }
        }
      }
    }
  }
  CHECK(attempts > 1000);
  CHECK(accepted == 0);
}
