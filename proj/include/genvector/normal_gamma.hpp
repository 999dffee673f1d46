#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genvector/hyperparameters.hpp"

namespace genvector {

// Per-topic, per-dimension sufficient statistics (n, sum x, sum x^2) of the
// points currently assigned to each topic in one modality.
class GaussianStats {
 public:
  GaussianStats() = default;
  GaussianStats(int topics, int dims);

  int topics() const noexcept { return topics_; }
  int dims() const noexcept { return dims_; }

  long count(int topic) const { return counts_[static_cast<std::size_t>(topic)]; }
  double sum(int topic, int dim) const { return sums_[index(topic, dim)]; }
  double sum_sq(int topic, int dim) const { return sum_sqs_[index(topic, dim)]; }

  // Throws InvalidArgument on dimension mismatch or bad topic; remove() throws
  // InvalidState when the topic is empty.
  void add(int topic, std::span<const double> point);
  void remove(int topic, std::span<const double> point);
  void clear();

  // Largest |difference| of any field relative to max(1, |value|).
  double max_relative_difference(const GaussianStats& other) const;

  bool operator==(const GaussianStats&) const = default;

 private:
  std::size_t index(int topic, int dim) const {
    return static_cast<std::size_t>(topic) * static_cast<std::size_t>(dims_) +
           static_cast<std::size_t>(dim);
  }
  void check(int topic, std::span<const double> point) const;

  int topics_ = 0;
  int dims_ = 0;
  std::vector<long> counts_;
  std::vector<double> sums_;
  std::vector<double> sum_sqs_;
};

// Normal-gamma posterior (alpha_n, beta_n, kappa_n, mu_n) after n points.
struct NormalGammaPosterior {
  double alpha;
  double beta;
  double kappa;
  double mu;
};

NormalGammaPosterior posterior(const NormalGammaPrior& prior, long n, double sum, double sum_sq);

// log G': log posterior-predictive density of x given the points currently in
// (topic, dim). The candidate point must not be part of `stats`. Equals a
// Student-t log-density with 2*alpha_n degrees of freedom, location mu_n and
// squared scale beta_n (kappa_n + 1) / (alpha_n kappa_n).
double log_gprime(const GaussianStats& stats, int topic, int dim, double x,
                  const NormalGammaPrior& prior);

// Same quantity with lgamma differences precomputed for every count up to
// max_count. Const and thread-safe after construction; used by the sampler.
class PredictiveDensity {
 public:
  PredictiveDensity(const NormalGammaPrior& prior, long max_count);

  const NormalGammaPrior& prior() const noexcept { return prior_; }
  double log_density(const GaussianStats& stats, int topic, int dim, double x) const;
  // Sum over all dims of log_density for one point.
  double log_density(const GaussianStats& stats, int topic, std::span<const double> point) const;

 private:
  NormalGammaPrior prior_;
  std::vector<double> lgamma_step_;  // lgamma(alpha0 + (n+1)/2) - lgamma(alpha0 + n/2)
};

// Expected precision alpha_n / beta_n and mean mu_n for one topic-dimension.
struct GaussianReadout {
  double mu;
  double lambda;
};
GaussianReadout readout(const NormalGammaPrior& prior, long n, double sum, double sum_sq);

}  // namespace genvector
