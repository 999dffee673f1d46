#include "genvector/normal_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genvector/error.hpp"

namespace genvector {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi) / 2

// Log predictive of x given the posterior after m points; lgamma_step is
// lgamma(alpha_m + 1/2) - lgamma(alpha_m).
double log_predictive(const NormalGammaPosterior& post, double lgamma_step, double x) {
  const double kappa_next = post.kappa + 1.0;
  const double diff = x - post.mu;
  const double delta = post.kappa * diff * diff / (2.0 * kappa_next);
  const double beta_next = post.beta + delta;
  return lgamma_step - post.alpha * std::log1p(delta / post.beta) - 0.5 * std::log(beta_next) +
         0.5 * std::log(post.kappa / kappa_next) - kHalfLog2Pi;
}

double lgamma_step(double alpha) { return std::lgamma(alpha + 0.5) - std::lgamma(alpha); }

}  // namespace

GaussianStats::GaussianStats(int topics, int dims)
    : topics_(topics),
      dims_(dims),
      counts_(static_cast<std::size_t>(topics), 0),
      sums_(static_cast<std::size_t>(topics) * static_cast<std::size_t>(dims), 0.0),
      sum_sqs_(sums_.size(), 0.0) {
  if (topics < 1 || dims < 1) throw InvalidArgument("GaussianStats needs topics >= 1 and dims >= 1");
}

void GaussianStats::check(int topic, std::span<const double> point) const {
  if (topic < 0 || topic >= topics_) {
    throw InvalidArgument("topic " + std::to_string(topic) + " out of range [0, " +
                          std::to_string(topics_) + ")");
  }
  if (point.size() != static_cast<std::size_t>(dims_)) {
    throw InvalidArgument("point has dimension " + std::to_string(point.size()) + ", expected " +
                          std::to_string(dims_));
  }
}

void GaussianStats::add(int topic, std::span<const double> point) {
  check(topic, point);
  ++counts_[static_cast<std::size_t>(topic)];
  for (int e = 0; e < dims_; ++e) {
    const double x = point[static_cast<std::size_t>(e)];
    sums_[index(topic, e)] += x;
    sum_sqs_[index(topic, e)] += x * x;
  }
}

void GaussianStats::remove(int topic, std::span<const double> point) {
  check(topic, point);
  auto& n = counts_[static_cast<std::size_t>(topic)];
  if (n == 0) {
    throw InvalidState("cannot remove a point from empty topic " + std::to_string(topic));
  }
  --n;
  for (int e = 0; e < dims_; ++e) {
    const double x = point[static_cast<std::size_t>(e)];
    if (n == 0) {
      sums_[index(topic, e)] = 0.0;
      sum_sqs_[index(topic, e)] = 0.0;
    } else {
      sums_[index(topic, e)] -= x;
      sum_sqs_[index(topic, e)] -= x * x;
    }
  }
}

void GaussianStats::clear() {
  std::fill(counts_.begin(), counts_.end(), 0);
  std::fill(sums_.begin(), sums_.end(), 0.0);
  std::fill(sum_sqs_.begin(), sum_sqs_.end(), 0.0);
}

double GaussianStats::max_relative_difference(const GaussianStats& other) const {
  if (topics_ != other.topics_ || dims_ != other.dims_ || counts_ != other.counts_) {
    return HUGE_VAL;
  }
  double worst = 0.0;
  auto compare = [&worst](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
      worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
  };
  compare(sums_, other.sums_);
  compare(sum_sqs_, other.sum_sqs_);
  return worst;
}

NormalGammaPosterior posterior(const NormalGammaPrior& prior, long n, double sum, double sum_sq) {
  const double count = static_cast<double>(n);
  NormalGammaPosterior post{prior.alpha0 + 0.5 * count, prior.beta0, prior.kappa0 + count,
                            prior.mu0};
  if (n == 0) return post;
  const double mean = sum / count;
  const double scatter = std::max(0.0, sum_sq - sum * mean);
  const double offset = mean - prior.mu0;
  post.mu = (prior.kappa0 * prior.mu0 + sum) / post.kappa;
  post.beta = prior.beta0 + 0.5 * scatter + prior.kappa0 * count * offset * offset / (2.0 * post.kappa);
  return post;
}

GaussianReadout readout(const NormalGammaPrior& prior, long n, double sum, double sum_sq) {
  const auto post = posterior(prior, n, sum, sum_sq);
  return {post.mu, post.alpha / post.beta};
}

double log_gprime(const GaussianStats& stats, int topic, int dim, double x,
                  const NormalGammaPrior& prior) {
  if (!std::isfinite(x)) throw InvalidArgument("log_gprime: non-finite point");
  if (topic < 0 || topic >= stats.topics() || dim < 0 || dim >= stats.dims()) {
    throw InvalidArgument("log_gprime: topic or dimension out of range");
  }
  const auto post =
      posterior(prior, stats.count(topic), stats.sum(topic, dim), stats.sum_sq(topic, dim));
  return log_predictive(post, lgamma_step(post.alpha), x);
}

PredictiveDensity::PredictiveDensity(const NormalGammaPrior& prior, long max_count)
    : prior_(prior), lgamma_step_(static_cast<std::size_t>(std::max(0L, max_count)) + 1) {
  for (std::size_t n = 0; n < lgamma_step_.size(); ++n) {
    lgamma_step_[n] = lgamma_step(prior.alpha0 + 0.5 * static_cast<double>(n));
  }
}

double PredictiveDensity::log_density(const GaussianStats& stats, int topic, int dim,
                                      double x) const {
  const long n = stats.count(topic);
  const auto post = posterior(prior_, n, stats.sum(topic, dim), stats.sum_sq(topic, dim));
  const double step = static_cast<std::size_t>(n) < lgamma_step_.size()
                          ? lgamma_step_[static_cast<std::size_t>(n)]
                          : lgamma_step(post.alpha);
  return log_predictive(post, step, x);
}

double PredictiveDensity::log_density(const GaussianStats& stats, int topic,
                                      std::span<const double> point) const {
  const long n = stats.count(topic);
  const double step = static_cast<std::size_t>(n) < lgamma_step_.size()
                          ? lgamma_step_[static_cast<std::size_t>(n)]
                          : lgamma_step(prior_.alpha0 + 0.5 * static_cast<double>(n));
  double total = 0.0;
  for (int e = 0; e < stats.dims(); ++e) {
    const auto post = posterior(prior_, n, stats.sum(topic, e), stats.sum_sq(topic, e));
    total += log_predictive(post, step, point[static_cast<std::size_t>(e)]);
  }
  return total;
}

}  // namespace genvector
