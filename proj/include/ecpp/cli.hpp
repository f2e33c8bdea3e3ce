#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

#include "ecpp/prover.hpp"

namespace ecpp::cli {

/// Decimal integer or a^b, a^b+c, a^b-c.
mpz_class parse_number(const std::string& text);

/// Seeded random probable primes with exactly `digits` decimal digits.
std::vector<mpz_class> random_primes(unsigned digits, std::size_t count, std::uint64_t seed);

/// Rows of the benchmark table: phase, min, max, avg, std (tab separated).
std::string bench_table(const std::vector<PhaseStats>& runs, const std::vector<double>& check_seconds);

/// Entry point of the `ecpp` tool. Exit codes: 0 prime / valid, 2 composite /
/// invalid, 1 usage or input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ecpp::cli
