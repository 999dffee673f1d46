#pragma once

#include <cstdint>
#include <vector>

#include "genvector/corpus.hpp"
#include "genvector/embeddings.hpp"
#include "genvector/hyperparameters.hpp"
#include "genvector/matrix.hpp"

namespace genvector {

struct SyntheticConfig {
  int num_users = 200;
  int num_topics = 5;
  int vocab_size = 500;
  int tokens_per_doc = 50;
  int user_dim = 8;
  int concept_dim = 8;
  // Minimum Euclidean distance between topic mean vectors, in units of the
  // largest per-dimension standard deviation of the two topics.
  double separation = 4.0;
  double alpha = 0.25;  // Dirichlet concentration for theta_u
  // Normal-gamma priors the true per-topic (mu, lambda) are drawn from.
  // Precisions average alpha0/beta0 = 1e4 (users) and 1e3 (concepts), the
  // scale the default training prior expects.
  NormalGammaPrior user_prior{100.0, 0.01, 0.25, 0.0};
  NormalGammaPrior concept_prior{100.0, 0.1, 0.25, 0.0};
  int max_attempts = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GroundTruth {
  std::vector<std::vector<int>> z;
  std::vector<int> y;
  std::vector<int> concept_topic;  // the single true topic of each vocab entry
  Matrix user_mu, user_lambda;        // T x E^r
  Matrix concept_mu, concept_lambda;  // T x E^k
  std::vector<std::vector<int>> relevant;  // per user, ascending concept ids
};

struct SyntheticData {
  Corpus corpus;
  EmbeddingStore embeddings;
  GroundTruth truth;
};

// Forward-samples the generative process. Each concept owns one true topic
// and one embedding; a token whose sampled topic is t emits a uniformly
// chosen concept of topic t. Throws InvalidArgument if the separation cannot
// be met within max_attempts draws.
SyntheticData generate_synthetic(const SyntheticConfig& config);

}  // namespace genvector
