#include "genvector/embedding_optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "genvector/error.hpp"
#include "genvector/params.hpp"
#include "genvector/topic_state.hpp"

namespace genvector {

namespace {

// sum_e -lambda_e/2 (x_e - mu_e)^2
double penalty(std::span<const double> x, std::span<const double> mu,
               std::span<const double> lambda) {
  double total = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    const double d = x[e] - mu[e];
    total -= 0.5 * lambda[e] * d * d;
  }
  return total;
}

void add_pull(std::span<double> grad, double weight, std::span<const double> x,
              std::span<const double> mu, std::span<const double> lambda) {
  for (std::size_t e = 0; e < x.size(); ++e) grad[e] -= weight * lambda[e] * (x[e] - mu[e]);
}

void check_shapes(const TopicState& state, const ModelParams& params,
                  const EmbeddingStore& embeddings) {
  const auto topics = static_cast<std::size_t>(state.num_topics);
  if (params.user_mu.rows() != topics || params.concept_mu.rows() != topics ||
      params.user_mu.cols() != embeddings.user_dim() ||
      params.concept_mu.cols() != embeddings.concept_dim() ||
      state.y.size() != embeddings.users.rows() ||
      state.stats.concept_topic.rows() != embeddings.concepts.rows()) {
    throw InvalidArgument("parameters, state and embeddings have incongruent shapes");
  }
}

}  // namespace

LikelihoodReport log_likelihood(const TopicState& state, const ModelParams& params,
                                const EmbeddingStore& embeddings, UserTermForm form) {
  check_shapes(state, params, embeddings);
  const auto topics = static_cast<std::size_t>(state.num_topics);
  LikelihoodReport report;
  for (std::size_t u = 0; u < embeddings.users.rows(); ++u) {
    const auto f = embeddings.users.row(u);
    if (form == UserTermForm::kAssignedTopic) {
      const auto t = static_cast<std::size_t>(state.y[u]);
      report.user_term += penalty(f, params.user_mu.row(t), params.user_lambda.row(t));
      continue;
    }
    double row = 0.0;
    for (std::size_t t = 0; t < topics; ++t) {
      row += penalty(f, params.user_mu.row(t), params.user_lambda.row(t));
    }
    report.user_term += row;
  }
  for (std::size_t w = 0; w < embeddings.concepts.rows(); ++w) {
    const auto f = embeddings.concepts.row(w);
    double row = 0.0;
    for (std::size_t t = 0; t < topics; ++t) {
      const int n = state.stats.concept_topic(w, t);
      if (n == 0) continue;
      row += n * penalty(f, params.concept_mu.row(t), params.concept_lambda.row(t));
    }
    report.concept_term += row;
  }
  report.total = report.user_term + report.concept_term;
  return report;
}

EmbeddingGradients gradients(const TopicState& state, const ModelParams& params,
                             const EmbeddingStore& embeddings, UserTermForm form) {
  check_shapes(state, params, embeddings);
  const auto topics = static_cast<std::size_t>(state.num_topics);
  EmbeddingGradients grads{Matrix(embeddings.users.rows(), embeddings.user_dim()),
                           Matrix(embeddings.concepts.rows(), embeddings.concept_dim())};
  for (std::size_t u = 0; u < embeddings.users.rows(); ++u) {
    const auto f = embeddings.users.row(u);
    for (std::size_t t = 0; t < topics; ++t) {
      if (form == UserTermForm::kAssignedTopic && t != static_cast<std::size_t>(state.y[u])) {
        continue;
      }
      add_pull(grads.users.row(u), 1.0, f, params.user_mu.row(t), params.user_lambda.row(t));
    }
  }
  for (std::size_t w = 0; w < embeddings.concepts.rows(); ++w) {
    const auto f = embeddings.concepts.row(w);
    for (std::size_t t = 0; t < topics; ++t) {
      const int n = state.stats.concept_topic(w, t);
      if (n == 0) continue;
      add_pull(grads.concepts.row(w), n, f, params.concept_mu.row(t), params.concept_lambda.row(t));
    }
  }
  return grads;
}

EmbeddingStore update_embeddings(const TopicState& state, const ModelParams& params,
                                 EmbeddingStore embeddings, const Hyperparameters& hyper) {
  if (!std::isfinite(hyper.embed_lr) || hyper.embed_lr < 0.0) {
    throw InvalidArgument("embed_lr must be finite and non-negative");
  }
  auto finite = [](const Matrix& m) {
    const auto v = m.values();
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  for (int step = 0; step < hyper.embed_steps; ++step) {
    const auto grads = gradients(state, params, embeddings, hyper.user_term);
    if (!finite(grads.users) || !finite(grads.concepts)) {
      throw InvalidState("embedding gradient is not finite");
    }
    auto apply = [lr = hyper.embed_lr](Matrix& target, const Matrix& grad) {
      auto dst = target.values();
      const auto src = grad.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += lr * src[i];
    };
    apply(embeddings.users, grads.users);
    apply(embeddings.concepts, grads.concepts);
  }
  return embeddings;
}

}  // namespace genvector
