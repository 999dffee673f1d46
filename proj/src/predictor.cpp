#include "genvector/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genvector/error.hpp"
#include "genvector/sampler.hpp"

namespace genvector {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

double log_normal(std::span<const double> x, std::span<const double> mu,
                  std::span<const double> lambda) {
  double total = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    const double d = x[e] - mu[e];
    total += 0.5 * std::log(lambda[e]) - kHalfLog2Pi - 0.5 * lambda[e] * d * d;
  }
  return total;
}

// Per-topic log(theta_u^t) + log N(f^r_u | topic t): constant across concepts.
std::vector<double> user_factors(const TrainedModel& model, std::size_t user) {
  const auto& p = model.params;
  std::vector<double> factors(p.user_mu.rows());
  const auto f = model.embeddings.users.row(user);
  for (std::size_t t = 0; t < factors.size(); ++t) {
    factors[t] = std::log(p.theta(user, t)) + log_normal(f, p.user_mu.row(t), p.user_lambda.row(t));
  }
  return factors;
}

double score_with(const TrainedModel& model, const std::vector<double>& factors,
                  std::size_t concept_id, int count, std::vector<double>& scratch) {
  const auto& p = model.params;
  const auto f = model.embeddings.concepts.row(concept_id);
  scratch.resize(factors.size());
  for (std::size_t t = 0; t < factors.size(); ++t) {
    scratch[t] = factors[t] + log_normal(f, p.concept_mu.row(t), p.concept_lambda.row(t));
  }
  return std::log(count + model.hyper.laplace) + log_sum_exp(scratch);
}

void check_user(const TrainedModel& model, std::size_t user) {
  if (user >= model.corpus.num_users()) {
    throw InvalidArgument("unknown user index " + std::to_string(user));
  }
}

}  // namespace

double score(const TrainedModel& model, std::size_t user, std::size_t concept_id) {
  check_user(model, user);
  if (concept_id >= model.corpus.num_concepts()) {
    throw InvalidArgument("unknown concept index " + std::to_string(concept_id));
  }
  const auto& doc = model.corpus.docs[user];
  const auto count =
      static_cast<int>(std::count(doc.begin(), doc.end(), static_cast<int>(concept_id)));
  if (count == 0 && model.hyper.laplace <= 0.0) {
    throw InvalidArgument("concept never used by the user has zero mass when laplace = 0");
  }
  std::vector<double> scratch;
  return score_with(model, user_factors(model, user), concept_id, count, scratch);
}

std::vector<RankedConcept> rank_user(const TrainedModel& model, std::size_t user, std::size_t k,
                                     CandidateSet candidates) {
  check_user(model, user);
  if (k == 0) throw InvalidArgument("k must be >= 1");

  std::vector<std::pair<int, int>> counts = model.corpus.concept_counts(user);
  if (candidates == CandidateSet::kVocabulary) {
    if (model.hyper.laplace <= 0.0) {
      throw InvalidArgument("full-vocabulary ranking requires laplace > 0");
    }
    std::vector<std::pair<int, int>> all(model.corpus.num_concepts());
    for (std::size_t w = 0; w < all.size(); ++w) all[w] = {static_cast<int>(w), 0};
    for (const auto& [w, n] : counts) all[static_cast<std::size_t>(w)].second = n;
    counts = std::move(all);
  }

  const auto factors = user_factors(model, user);
  std::vector<double> scratch;
  std::vector<RankedConcept> ranked;
  ranked.reserve(counts.size());
  for (const auto& [w, n] : counts) {
    ranked.push_back({w, score_with(model, factors, static_cast<std::size_t>(w), n, scratch)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedConcept& a, const RankedConcept& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.concept_id < b.concept_id;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

SocialKnowledgeGraph build_skg(const TrainedModel& model, std::size_t k, CandidateSet candidates) {
  SocialKnowledgeGraph skg;
  skg.lists.reserve(model.corpus.num_users());
  for (std::size_t u = 0; u < model.corpus.num_users(); ++u) {
    skg.lists.push_back(rank_user(model, u, k, candidates));
  }
  return skg;
}

}  // namespace genvector
