#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecpp/certificate.hpp"
#include "ecpp/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ecpp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ecpp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("number syntax") {
  CHECK(ecpp::cli::parse_number("10007") == 10007);
  CHECK(ecpp::cli::parse_number("2^89-1") == (mpz_class(1) << 89) - 1);
  CHECK(ecpp::cli::parse_number("2^10+7") == 1031);
  CHECK(ecpp::cli::parse_number("10^3") == 1000);
  CHECK_THROWS(ecpp::cli::parse_number("12a"));
  CHECK_THROWS(ecpp::cli::parse_number(""));
}

TEST_CASE("random primes have the requested size") {
  const auto ps = ecpp::cli::random_primes(30, 5, 1);
  CHECK(ps.size() == 5);
  for (const auto& p : ps) {
    CHECK(p.get_str().size() == 30);
    CHECK(mpz_probab_prime_p(p.get_mpz_t(), 30) > 0);
  }
  CHECK(ps == ecpp::cli::random_primes(30, 5, 1));
}

TEST_CASE("prove then verify through the command line") {
  const auto dir = std::filesystem::temp_directory_path() / "ecpp_cli_unit";
  std::filesystem::create_directories(dir);
  const std::string cert = (dir / "c.txt").string();
  CHECK(run({"prove", "10007", "--out", cert}).code == 0);
  CHECK(run({"verify", "--in", cert}).code == 0);

  CHECK(run({"prove", "2^89-1", "--out", cert}).code == 0);
  CHECK(run({"verify", "--in", cert}).code == 0);

  auto parsed = ecpp::read_certificate_file(cert);
  parsed.steps.front().x += 1;
  ecpp::write_certificate_file(parsed, cert);
  CHECK(run({"verify", "--in", cert}).code == 2);

  CHECK(run({"prove", "561"}).code == 2);
  CHECK(run({"verify", "--in", "/dev/null"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("classpoly writes the cache file") {
  const auto dir = std::filesystem::temp_directory_path() / "ecpp_cli_unit_hd";
  std::filesystem::create_directories(dir);
  const std::string file = (dir / "HD_23.txt").string();
  CHECK(run({"classpoly", "23", "--out", file}).code == 0);
  std::ifstream in(file);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "23\n3\n1\n3491750\n-5151296875\n12771880859375\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench prints a parseable table") {
  const auto r = run({"bench", "--digits", "30", "--count", "3", "--seed", "5"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "phase\tmin\tmax\tavg\tstd");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name;
    double v[4];
    fields >> name >> v[0] >> v[1] >> v[2] >> v[3];
    CHECK_FALSE(fields.fail());
    CHECK(v[0] <= v[2]);
    CHECK(v[2] <= v[1]);
    ++rows;
  }
  CHECK(rows >= 10);
}
