#include "genvector/params.hpp"

#include <string>

#include "genvector/error.hpp"
#include "genvector/topic_state.hpp"

namespace genvector {

namespace {

void read_modality(const GaussianStats& stats, const NormalGammaPrior& prior, Matrix& mu,
                   Matrix& lambda) {
  mu = Matrix(static_cast<std::size_t>(stats.topics()), static_cast<std::size_t>(stats.dims()));
  lambda = mu;
  for (int t = 0; t < stats.topics(); ++t) {
    for (int e = 0; e < stats.dims(); ++e) {
      const auto r = readout(prior, stats.count(t), stats.sum(t, e), stats.sum_sq(t, e));
      mu(static_cast<std::size_t>(t), static_cast<std::size_t>(e)) = r.mu;
      lambda(static_cast<std::size_t>(t), static_cast<std::size_t>(e)) = r.lambda;
    }
  }
}

bool same_shape(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

void accumulate(Matrix& into, const Matrix& from) {
  auto dst = into.values();
  auto src = from.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void divide(Matrix& m, double divisor) {
  for (double& v : m.values()) v /= divisor;
}

}  // namespace

ModelParams readout_params(const TopicSuffStats& stats, const Hyperparameters& hyper) {
  ModelParams params;
  const std::size_t users = stats.doc_topic.rows();
  const std::size_t topics = stats.doc_topic.cols();
  params.theta = Matrix(users, topics);
  for (std::size_t u = 0; u < users; ++u) {
    double total = 0.0;
    for (std::size_t t = 0; t < topics; ++t) total += stats.doc_topic(u, t) + hyper.alpha;
    for (std::size_t t = 0; t < topics; ++t) {
      params.theta(u, t) = (stats.doc_topic(u, t) + hyper.alpha) / total;
    }
  }
  read_modality(stats.user, hyper.user_prior, params.user_mu, params.user_lambda);
  read_modality(stats.concepts, hyper.concept_prior, params.concept_mu, params.concept_lambda);
  return params;
}

void ReadoutAverager::add(const ModelParams& params) {
  if (count_ == 0) {
    sum_ = params;
  } else {
    if (!same_shape(sum_.theta, params.theta) || !same_shape(sum_.user_mu, params.user_mu) ||
        !same_shape(sum_.user_lambda, params.user_lambda) ||
        !same_shape(sum_.concept_mu, params.concept_mu) ||
        !same_shape(sum_.concept_lambda, params.concept_lambda)) {
      throw InvalidArgument("read-outs have mismatched shapes");
    }
    accumulate(sum_.theta, params.theta);
    accumulate(sum_.user_mu, params.user_mu);
    accumulate(sum_.user_lambda, params.user_lambda);
    accumulate(sum_.concept_mu, params.concept_mu);
    accumulate(sum_.concept_lambda, params.concept_lambda);
  }
  ++count_;
}

ModelParams ReadoutAverager::mean() const {
  if (count_ == 0) throw InvalidState("no read-outs to average");
  if (count_ == 1) return sum_;
  ModelParams mean = sum_;
  const auto n = static_cast<double>(count_);
  divide(mean.theta, n);
  divide(mean.user_mu, n);
  divide(mean.user_lambda, n);
  divide(mean.concept_mu, n);
  divide(mean.concept_lambda, n);
  return mean;
}

ModelParams average_readouts(std::span<const ModelParams> readouts) {
  if (readouts.empty()) throw InvalidArgument("average_readouts: empty list");
  ReadoutAverager averager;
  for (const auto& r : readouts) averager.add(r);
  return averager.mean();
}

}  // namespace genvector
