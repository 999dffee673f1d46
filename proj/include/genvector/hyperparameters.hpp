#pragma once

#include <cstdint>
#include <string_view>

namespace genvector {

// Normal-gamma prior over the mean and precision of one embedding dimension.
// The defaults are a sharp precision prior (alpha0/beta0 = 1000) with a nearly
// flat prior on the mean.
struct NormalGammaPrior {
  double alpha0 = 1e3;
  double beta0 = 1.0;
  double kappa0 = 1e-5;
  double mu0 = 0.0;

  void validate(std::string_view name) const;
  bool operator==(const NormalGammaPrior&) const = default;
};

// Form of the user term in the embedding log-likelihood.
//   kPrinted:       sums the Gaussian penalty over every topic, unweighted.
//   kAssignedTopic: only the user's current topic y_u contributes.
enum class UserTermForm { kPrinted, kAssignedTopic };

std::string_view to_string(UserTermForm form);
UserTermForm user_term_form_from_string(std::string_view name);

struct Hyperparameters {
  NormalGammaPrior user_prior;     // tau^r
  NormalGammaPrior concept_prior;  // tau^k
  double alpha = 0.25;             // symmetric Dirichlet concentration
  double laplace = 1.0;            // Laplace smoothing constant l
  int num_topics = 200;

  int burn_in = 20;         // t_b
  int max_iter = 60;        // t_m
  int latent_iters = 5;     // t_l, sweeps per outer iteration
  int readout_period = 5;   // t_p, sweeps between read-outs

  double embed_lr = 1e-3;
  int embed_steps = 1;
  bool update_embeddings = true;  // false reproduces the fixed-embedding variant
  UserTermForm user_term = UserTermForm::kPrinted;

  std::uint64_t seed = 0;
  int threads = 1;  // >1 switches to the approximate parallel sweep

  // Throws InvalidArgument naming the first violated constraint.
  void validate() const;
  bool operator==(const Hyperparameters&) const = default;
};

}  // namespace genvector
