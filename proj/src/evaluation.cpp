#include "genvector/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "genvector/corpus.hpp"
#include "genvector/error.hpp"

namespace genvector {

double precision_at_k(const SocialKnowledgeGraph& skg, const std::vector<std::vector<int>>& truth,
                      std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  if (truth.size() != skg.lists.size()) {
    throw InvalidArgument("truth sets and ranked lists cover different user counts");
  }
  double total = 0.0;
  std::size_t evaluated = 0;
  for (std::size_t u = 0; u < truth.size(); ++u) {
    const auto& relevant = truth[u];
    const auto& ranked = skg.lists[u];
    if (relevant.empty() || ranked.empty()) continue;
    const std::size_t depth = std::min(k, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
      if (std::find(relevant.begin(), relevant.end(), ranked[i].concept_id) != relevant.end()) {
        ++hits;
      }
    }
    total += static_cast<double>(hits) / static_cast<double>(depth);
    ++evaluated;
  }
  if (evaluated == 0) throw InvalidArgument("precision_at_k: no evaluable users");
  return total / static_cast<double>(evaluated);
}

SocialKnowledgeGraph frequency_baseline(const Corpus& corpus, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  SocialKnowledgeGraph skg;
  skg.lists.reserve(corpus.num_users());
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    auto counts = corpus.concept_counts(u);
    std::stable_sort(counts.begin(), counts.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<RankedConcept> ranked;
    for (std::size_t i = 0; i < std::min(k, counts.size()); ++i) {
      ranked.push_back({counts[i].first, static_cast<double>(counts[i].second)});
    }
    skg.lists.push_back(std::move(ranked));
  }
  return skg;
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights) {
  const std::size_t n = weights.size();
  for (const auto& row : weights) {
    if (row.size() != n) throw InvalidArgument("assignment matrix must be square");
  }
  if (n == 0) return {};
  // Hungarian algorithm (potentials form) on costs = -weights, 1-based.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col] = true;
      const std::size_t row = match[col];
      double delta = kInf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = -weights[row - 1][j - 1] - row_pot[row] - col_pot[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const std::size_t prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<int> result(n);
  for (std::size_t j = 1; j <= n; ++j) result[match[j] - 1] = static_cast<int>(j - 1);
  return result;
}

double topic_recovery_accuracy(std::span<const int> predicted, std::span<const int> truth,
                               int num_topics) {
  if (num_topics < 1) throw InvalidArgument("num_topics must be >= 1");
  if (predicted.size() != truth.size()) throw InvalidArgument("label sequences differ in length");
  if (predicted.empty()) throw InvalidArgument("no labels to compare");
  const auto topics = static_cast<std::size_t>(num_topics);
  std::vector<std::vector<double>> confusion(topics, std::vector<double>(topics, 0.0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i];
    const int t = truth[i];
    if (p < 0 || p >= num_topics || t < 0 || t >= num_topics) {
      throw InvalidArgument("label " + std::to_string(p < 0 || p >= num_topics ? p : t) +
                            " outside [0, " + std::to_string(num_topics) + ")");
    }
    confusion[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] += 1.0;
  }
  const auto matching = max_weight_assignment(confusion);
  double agree = 0.0;
  for (std::size_t p = 0; p < topics; ++p) agree += confusion[p][static_cast<std::size_t>(matching[p])];
  return agree / static_cast<double>(predicted.size());
}

}  // namespace genvector
