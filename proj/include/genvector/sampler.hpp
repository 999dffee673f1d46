#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genvector/corpus.hpp"
#include "genvector/embeddings.hpp"
#include "genvector/hyperparameters.hpp"
#include "genvector/normal_gamma.hpp"
#include "genvector/params.hpp"
#include "genvector/topic_state.hpp"

namespace genvector {

// log(sum(exp(v))), stable for large magnitudes; -inf for an all -inf input.
double log_sum_exp(std::span<const double> values);

// Converts log-scores to a probability vector in place.
void normalize_log_scores(std::span<double> scores);

// Inverse-CDF draw with a fixed left-to-right accumulation order.
// `u` must lie in [0, 1).
int sample_categorical(std::span<const double> probs, double u);

// Shared, read-only pieces needed to score assignments.
class ConditionalModel {
 public:
  ConditionalModel(const Corpus& corpus, const EmbeddingStore& embeddings,
                   const Hyperparameters& hyper);

  const Corpus& corpus() const noexcept { return corpus_; }
  const EmbeddingStore& embeddings() const noexcept { return embeddings_; }
  const Hyperparameters& hyper() const noexcept { return hyper_; }

  // Log-scores of p(y_u = t | rest). `state` must have user u removed.
  void user_log_scores(const TopicState& state, std::size_t user, std::span<double> out) const;

  // Log-scores of p(z_um = t | rest). Token (u, m) must be removed and
  // `concept_stats` is the concept-modality statistics to score against.
  void token_log_scores(const TopicState& state, const GaussianStats& concept_stats,
                        std::size_t user, std::size_t pos, std::span<double> out) const;

 private:
  const Corpus& corpus_;
  const EmbeddingStore& embeddings_;
  const Hyperparameters& hyper_;
  PredictiveDensity user_density_;
  PredictiveDensity concept_density_;
};

// Normalized conditional p(y_u = t | y_-u, z, f). The state is temporarily
// modified and restored with user u back in its current topic.
std::vector<double> conditional_y(TopicState& state, const Corpus& corpus,
                                  const EmbeddingStore& embeddings, const Hyperparameters& hyper,
                                  std::size_t user);

// Normalized conditional p(z_um = t | z_-um, y, f); same restore contract.
std::vector<double> conditional_z(TopicState& state, const Corpus& corpus,
                                  const EmbeddingStore& embeddings, const Hyperparameters& hyper,
                                  std::size_t user, std::size_t pos);

// One Gibbs sweep: every z in document order, then every y. Uses the
// approximate parallel scheme when hyper.threads > 1. `sweep_index` seeds the
// per-worker generators in parallel mode.
void sweep(TopicState& state, const ConditionalModel& model, Rng& rng,
           std::size_t sweep_index = 0);

struct TracePoint {
  int iteration = 0;
  double seconds = 0.0;
  double log_likelihood = 0.0;
};

struct EmbeddingUpdateRecord {
  int iteration = 0;
  double before = 0.0;
  double after = 0.0;
};

struct TrainedModel {
  Corpus corpus;
  Hyperparameters hyper;
  ModelParams params;  // averaged read-outs
  TopicState state;    // final assignments
  EmbeddingStore embeddings;
  // One point per post-burn-in outer iteration.
  std::vector<TracePoint> trace;
  // Likelihood at the end of the burn-in period, before any embedding update.
  double burn_in_log_likelihood = 0.0;
  // L before/after each embedding update, evaluated at the parameters used
  // for that update. Not persisted.
  std::vector<EmbeddingUpdateRecord> updates;
};

// Alternating optimization: t_m outer iterations of t_l sweeps each, read-outs
// every t_p sweeps after burn-in, one embedding update per post-burn-in outer
// iteration.
TrainedModel run_inference(Corpus corpus, EmbeddingStore embeddings, const Hyperparameters& hyper);

}  // namespace genvector
