// Stand-alone certificate checker. Built only against the verifier library, so
// it cannot reach any of the search code.
#include <CLI11.hpp>

#include <iostream>

#include "ecpp/certificate.hpp"
#include "ecpp/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verify an ECPP certificate"};
  std::string path;
  bool quiet = false;
  app.add_option("certificate", path, "Certificate file")->required();
  app.add_flag("-q,--quiet", quiet, "Only set the exit status");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    const ecpp::Certificate cert = ecpp::read_certificate_file(path);
    const ecpp::Verdict v = ecpp::verify_chain(cert);
    if (!quiet) std::cout << (v ? "valid" : "invalid: " + v.reason) << '\n';
    return v ? 0 : 2;
  } catch (const ecpp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
