#include "genvector/hyperparameters.hpp"

#include <cmath>
#include <string>

#include "genvector/error.hpp"

namespace genvector {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("invalid hyperparameters: " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void NormalGammaPrior::validate(std::string_view name) const {
  const std::string prefix(name);
  require(positive(alpha0), prefix + ".alpha0 must be > 0");
  require(positive(beta0), prefix + ".beta0 must be > 0");
  require(positive(kappa0), prefix + ".kappa0 must be > 0");
  require(std::isfinite(mu0), prefix + ".mu0 must be finite");
}

std::string_view to_string(UserTermForm form) {
  switch (form) {
    case UserTermForm::kPrinted:
      return "printed";
    case UserTermForm::kAssignedTopic:
      return "assigned";
  }
  return "printed";
}

UserTermForm user_term_form_from_string(std::string_view name) {
  if (name == "printed") return UserTermForm::kPrinted;
  if (name == "assigned") return UserTermForm::kAssignedTopic;
  throw InvalidArgument("unknown user term form '" + std::string(name) +
                        "' (expected printed or assigned)");
}

void Hyperparameters::validate() const {
  user_prior.validate("user_prior");
  concept_prior.validate("concept_prior");
  require(positive(alpha), "alpha must be > 0");
  require(std::isfinite(laplace) && laplace >= 0.0, "laplace must be >= 0");
  require(num_topics >= 1, "num_topics must be >= 1");
  require(burn_in >= 1, "burn_in must be >= 1");
  require(max_iter >= 1, "max_iter must be >= 1");
  require(latent_iters >= 1, "latent_iters must be >= 1");
  require(readout_period >= 1, "readout_period must be >= 1");
  require(burn_in < max_iter, "burn_in must be < max_iter");
  require(readout_period <= latent_iters, "readout_period must be <= latent_iters");
  require(positive(embed_lr), "embed_lr must be > 0");
  require(embed_steps >= 1, "embed_steps must be >= 1");
  require(threads >= 1, "threads must be >= 1");
}

}  // namespace genvector
