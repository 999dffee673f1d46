#pragma once

#include "genvector/embeddings.hpp"
#include "genvector/hyperparameters.hpp"
#include "genvector/matrix.hpp"

namespace genvector {

struct TopicState;
struct ModelParams;

struct LikelihoodReport {
  double total = 0.0;
  double user_term = 0.0;
  double concept_term = 0.0;
};

// Embedding log-likelihood
//   L = sum_u sum_t sum_e -lambda^r_te/2 (f^r_ue - mu^r_te)^2
//     + sum_w sum_t n_w^t sum_e -lambda^k_te/2 (f^k_we - mu^k_te)^2.
// With UserTermForm::kAssignedTopic the user sum runs over t = y_u only.
LikelihoodReport log_likelihood(const TopicState& state, const ModelParams& params,
                                const EmbeddingStore& embeddings,
                                UserTermForm form = UserTermForm::kPrinted);

struct EmbeddingGradients {
  Matrix users;
  Matrix concepts;
};

// Analytic dL/df^r and dL/df^k.
EmbeddingGradients gradients(const TopicState& state, const ModelParams& params,
                             const EmbeddingStore& embeddings,
                             UserTermForm form = UserTermForm::kPrinted);

// hyper.embed_steps steps of f <- f + embed_lr * dL/df with fixed topics and
// parameters. Throws InvalidState if a gradient is not finite. The caller
// must refresh the topic statistics afterwards.
EmbeddingStore update_embeddings(const TopicState& state, const ModelParams& params,
                                 EmbeddingStore embeddings, const Hyperparameters& hyper);

}  // namespace genvector
