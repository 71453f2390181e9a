#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rankedmm {

// Invalid user-supplied parameter (non-positive lambda, bad moment order, ...).
class param_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested tolerance cannot be met in double precision. Carries the
// tolerance that is achievable.
class capacity_error : public std::runtime_error {
 public:
  capacity_error(const std::string& what, double achievable)
      : std::runtime_error(what), achievable_(achievable) {}

  double achievable() const noexcept { return achievable_; }

 private:
  double achievable_ = 0.0;
};

// An estimate was evaluated outside its region of validity.
class region_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Offered load of the service system: arrival rate over service rate, with
// the mean service time normalized to 1 (so lambda is dimensionless).
struct ModelParams {
  double lambda = 1.0;

  explicit ModelParams(double lambda_in) : lambda(lambda_in) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
      throw param_error("lambda must be positive and finite, got " +
                        std::to_string(lambda_in));
    }
  }
};

// Default table depth: survival beyond lambda + 10*sqrt(lambda) + 50 is
// negligible (below ~1e-40) for every supported computation.
inline int default_l_max(const ModelParams& params) {
  return static_cast<int>(
      std::ceil(params.lambda + 10.0 * std::sqrt(params.lambda) + 50.0));
}

}  // namespace rankedmm
