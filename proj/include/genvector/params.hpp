#pragma once

#include <cstddef>
#include <span>

#include "genvector/hyperparameters.hpp"
#include "genvector/matrix.hpp"

namespace genvector {

struct TopicSuffStats;

// Point estimates read out from the sampler state.
struct ModelParams {
  Matrix theta;          // users x T
  Matrix user_mu;        // T x E^r
  Matrix user_lambda;    // T x E^r
  Matrix concept_mu;     // T x E^k
  Matrix concept_lambda; // T x E^k

  bool operator==(const ModelParams&) const = default;
};

// Posterior expectations of theta, mu and lambda given the current statistics.
ModelParams readout_params(const TopicSuffStats& stats, const Hyperparameters& hyper);

// Element-wise mean. Throws InvalidArgument for an empty list or mismatched shapes.
ModelParams average_readouts(std::span<const ModelParams> readouts);

// Running mean of read-outs as they arrive during training.
class ReadoutAverager {
 public:
  void add(const ModelParams& params);
  std::size_t count() const noexcept { return count_; }
  // Throws InvalidState before the first add().
  ModelParams mean() const;

 private:
  ModelParams sum_;
  std::size_t count_ = 0;
};

}  // namespace genvector
