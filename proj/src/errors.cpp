#include "ecpp/errors.hpp"

#include <utility>

namespace ecpp {

CompositeDetected::CompositeDetected(mpz_class n, mpz_class factor, const std::string& witness)
    : EcppError("composite: " + n.get_str() + " (" + witness + ")"),
      n_(std::move(n)),
      factor_(std::move(factor)),
      witness_(witness) {}

}  // namespace ecpp
