#include "genvector/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "genvector/embedding_optimizer.hpp"
#include "genvector/error.hpp"

namespace genvector {

namespace {

// Full recompute cadence for the incrementally maintained sums.
constexpr std::size_t kRefreshPeriod = 10;

int draw(std::span<double> scores, Rng& rng) {
  normalize_log_scores(scores);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return sample_categorical(scores, unit(rng));
}

void sample_tokens(TopicState& state, GaussianStats& concept_stats, const ConditionalModel& model,
                   std::size_t first_user, std::size_t last_user, Rng& rng) {
  const auto& corpus = model.corpus();
  const auto& concepts = model.embeddings().concepts;
  std::vector<double> scores(static_cast<std::size_t>(state.num_topics));
  for (std::size_t u = first_user; u < last_user; ++u) {
    auto& z = state.z[u];
    for (std::size_t m = 0; m < z.size(); ++m) {
      const auto w = static_cast<std::size_t>(corpus.docs[u][m]);
      const auto row = concepts.row(w);
      concept_stats.remove(z[m], row);
      --state.stats.doc_topic(u, static_cast<std::size_t>(z[m]));
      model.token_log_scores(state, concept_stats, u, m, scores);
      z[m] = draw(scores, rng);
      concept_stats.add(z[m], row);
      ++state.stats.doc_topic(u, static_cast<std::size_t>(z[m]));
    }
  }
}

void sample_tokens_sequential(TopicState& state, const ConditionalModel& model, Rng& rng) {
  const auto& corpus = model.corpus();
  const auto& embeddings = model.embeddings();
  std::vector<double> scores(static_cast<std::size_t>(state.num_topics));
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    for (std::size_t m = 0; m < corpus.docs[u].size(); ++m) {
      remove_token(state, corpus, embeddings, u, m);
      model.token_log_scores(state, state.stats.concepts, u, m, scores);
      add_token(state, corpus, embeddings, u, m, draw(scores, rng));
    }
  }
}

// Documents are split into contiguous blocks; each worker samples against its
// own copy of the start-of-sweep concept statistics. Per-document counts live
// in disjoint rows. Global concept statistics are rebuilt after the barrier.
void sample_tokens_parallel(TopicState& state, const ConditionalModel& model,
                            std::size_t sweep_index) {
  const auto& corpus = model.corpus();
  const std::size_t users = corpus.num_users();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(model.hyper().threads), users);
  const GaussianStats snapshot = state.stats.concepts;

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t first = users * w / workers;
    const std::size_t last = users * (w + 1) / workers;
    pool.emplace_back([&, w, first, last] {
      try {
        GaussianStats local = snapshot;
        std::seed_seq seq{static_cast<std::uint64_t>(model.hyper().seed),
                          static_cast<std::uint64_t>(sweep_index), static_cast<std::uint64_t>(w)};
        Rng rng(seq);
        sample_tokens(state, local, model, first, last, rng);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto& stats = state.stats;
  stats.concepts.clear();
  stats.concept_topic = CountTable(corpus.num_concepts(), static_cast<std::size_t>(state.num_topics));
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t m = 0; m < corpus.docs[u].size(); ++m) {
      const auto w = static_cast<std::size_t>(corpus.docs[u][m]);
      stats.concepts.add(state.z[u][m], model.embeddings().concepts.row(w));
      ++stats.concept_topic(w, static_cast<std::size_t>(state.z[u][m]));
    }
  }
}

void sample_users(TopicState& state, const ConditionalModel& model, Rng& rng) {
  const auto& embeddings = model.embeddings();
  std::vector<double> scores(static_cast<std::size_t>(state.num_topics));
  for (std::size_t u = 0; u < state.y.size(); ++u) {
    remove_user(state, embeddings, u);
    model.user_log_scores(state, u, scores);
    add_user(state, embeddings, u, draw(scores, rng));
  }
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double total = 0.0;
  for (double v : values) total += std::exp(v - peak);
  return peak + std::log(total);
}

void normalize_log_scores(std::span<double> scores) {
  const double norm = log_sum_exp(scores);
  if (!std::isfinite(norm)) throw InvalidState("conditional has no finite log-score");
  for (double& s : scores) s = std::exp(s - norm);
}

int sample_categorical(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (u < cumulative) return last_positive;
  }
  if (last_positive < 0) throw InvalidState("categorical distribution has no mass");
  return last_positive;
}

ConditionalModel::ConditionalModel(const Corpus& corpus, const EmbeddingStore& embeddings,
                                   const Hyperparameters& hyper)
    : corpus_(corpus),
      embeddings_(embeddings),
      hyper_(hyper),
      user_density_(hyper.user_prior, static_cast<long>(corpus.num_users())),
      concept_density_(hyper.concept_prior, static_cast<long>(corpus.total_tokens())) {}

void ConditionalModel::user_log_scores(const TopicState& state, std::size_t user,
                                       std::span<double> out) const {
  const auto point = embeddings_.users.row(user);
  for (int t = 0; t < state.num_topics; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    out[ti] = std::log(state.stats.doc_topic(user, ti) + hyper_.laplace) +
              user_density_.log_density(state.stats.user, t, point);
  }
}

void ConditionalModel::token_log_scores(const TopicState& state,
                                        const GaussianStats& concept_stats, std::size_t user,
                                        std::size_t pos, std::span<double> out) const {
  const auto w = static_cast<std::size_t>(corpus_.docs[user][pos]);
  const auto point = embeddings_.concepts.row(w);
  const int y = state.y[user];
  const double user_support = state.stats.doc_topic(user, static_cast<std::size_t>(y));
  for (int t = 0; t < state.num_topics; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    const double coupling = user_support + (t == y ? 1.0 : 0.0) + hyper_.laplace;
    out[ti] = std::log(coupling) + std::log(state.stats.doc_topic(user, ti) + hyper_.alpha) +
              concept_density_.log_density(concept_stats, t, point);
  }
}

std::vector<double> conditional_y(TopicState& state, const Corpus& corpus,
                                  const EmbeddingStore& embeddings, const Hyperparameters& hyper,
                                  std::size_t user) {
  if (user >= corpus.num_users()) throw InvalidArgument("conditional_y: unknown user");
  const ConditionalModel model(corpus, embeddings, hyper);
  std::vector<double> scores(static_cast<std::size_t>(state.num_topics));
  const int current = state.y[user];
  remove_user(state, embeddings, user);
  model.user_log_scores(state, user, scores);
  add_user(state, embeddings, user, current);
  normalize_log_scores(scores);
  return scores;
}

std::vector<double> conditional_z(TopicState& state, const Corpus& corpus,
                                  const EmbeddingStore& embeddings, const Hyperparameters& hyper,
                                  std::size_t user, std::size_t pos) {
  if (user >= corpus.num_users() || pos >= corpus.docs[user].size()) {
    throw InvalidArgument("conditional_z: unknown token");
  }
  const ConditionalModel model(corpus, embeddings, hyper);
  std::vector<double> scores(static_cast<std::size_t>(state.num_topics));
  const int current = state.z[user][pos];
  remove_token(state, corpus, embeddings, user, pos);
  model.token_log_scores(state, state.stats.concepts, user, pos, scores);
  add_token(state, corpus, embeddings, user, pos, current);
  normalize_log_scores(scores);
  return scores;
}

void sweep(TopicState& state, const ConditionalModel& model, Rng& rng, std::size_t sweep_index) {
  if (model.hyper().threads > 1 && model.corpus().num_users() > 1) {
    sample_tokens_parallel(state, model, sweep_index);
  } else {
    sample_tokens_sequential(state, model, rng);
  }
  sample_users(state, model, rng);
}

TrainedModel run_inference(Corpus corpus, EmbeddingStore embeddings, const Hyperparameters& hyper) {
  hyper.validate();
  corpus.validate();
  embeddings.validate(corpus);

  TrainedModel result;
  result.corpus = std::move(corpus);
  result.embeddings = std::move(embeddings);
  result.hyper = hyper;

  Rng rng(hyper.seed);
  result.state = random_state(result.corpus, result.embeddings, hyper.num_topics, rng);
  const ConditionalModel model(result.corpus, result.embeddings, result.hyper);

  ReadoutAverager averager;
  std::size_t sweeps = 0;
  int since_readout = 0;
  const auto start = std::chrono::steady_clock::now();

  for (int iteration = 1; iteration <= hyper.max_iter; ++iteration) {
    const bool sampling_only = iteration <= hyper.burn_in;
    for (int s = 0; s < hyper.latent_iters; ++s) {
      sweep(result.state, model, rng, sweeps);
      if (++sweeps % kRefreshPeriod == 0) {
        refresh_stats(result.state, result.corpus, result.embeddings);
      }
      if (!sampling_only && ++since_readout == hyper.readout_period) {
        averager.add(readout_params(result.state.stats, hyper));
        since_readout = 0;
      }
    }

    if (iteration == hyper.burn_in) {
      result.burn_in_log_likelihood =
          log_likelihood(result.state, readout_params(result.state.stats, hyper),
                         result.embeddings, hyper.user_term)
              .total;
    }
    if (sampling_only) continue;

    const ModelParams params = averager.mean();
    if (hyper.update_embeddings) {
      EmbeddingUpdateRecord record;
      record.iteration = iteration;
      record.before = log_likelihood(result.state, params, result.embeddings, hyper.user_term).total;
      result.embeddings = update_embeddings(result.state, params, std::move(result.embeddings), hyper);
      refresh_stats(result.state, result.corpus, result.embeddings);
      record.after = log_likelihood(result.state, params, result.embeddings, hyper.user_term).total;
      result.updates.push_back(record);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.push_back(
        {iteration, seconds,
         log_likelihood(result.state, params, result.embeddings, hyper.user_term).total});
  }

  result.params = averager.mean();
  return result;
}

}  // namespace genvector
