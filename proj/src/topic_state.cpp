#include "genvector/topic_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genvector/corpus.hpp"
#include "genvector/embeddings.hpp"
#include "genvector/error.hpp"

namespace genvector {

TopicSuffStats compute_stats(const Corpus& corpus, const EmbeddingStore& embeddings,
                             int num_topics, const std::vector<std::vector<int>>& z,
                             const std::vector<int>& y) {
  TopicSuffStats stats{
      GaussianStats(num_topics, static_cast<int>(embeddings.user_dim())),
      GaussianStats(num_topics, static_cast<int>(embeddings.concept_dim())),
      CountTable(corpus.num_users(), static_cast<std::size_t>(num_topics)),
      CountTable(corpus.num_concepts(), static_cast<std::size_t>(num_topics)),
  };
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    stats.user.add(y[u], embeddings.users.row(u));
    const auto& doc = corpus.docs[u];
    for (std::size_t m = 0; m < doc.size(); ++m) {
      const int t = z[u][m];
      const auto w = static_cast<std::size_t>(doc[m]);
      stats.concepts.add(t, embeddings.concepts.row(w));
      ++stats.doc_topic(u, static_cast<std::size_t>(t));
      ++stats.concept_topic(w, static_cast<std::size_t>(t));
    }
  }
  return stats;
}

TopicState make_state(const Corpus& corpus, const EmbeddingStore& embeddings, int num_topics,
                      std::vector<std::vector<int>> z, std::vector<int> y) {
  if (num_topics < 1) throw InvalidArgument("num_topics must be >= 1");
  if (z.size() != corpus.num_users() || y.size() != corpus.num_users()) {
    throw InvalidArgument("assignment shape does not match corpus");
  }
  auto in_range = [num_topics](int t) { return t >= 0 && t < num_topics; };
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    if (z[u].size() != corpus.docs[u].size()) {
      throw InvalidArgument("z has wrong length for user '" + corpus.users[u] + "'");
    }
    if (!in_range(y[u]) || !std::all_of(z[u].begin(), z[u].end(), in_range)) {
      throw InvalidArgument("topic id out of range for user '" + corpus.users[u] + "'");
    }
  }
  TopicState state;
  state.num_topics = num_topics;
  state.stats = compute_stats(corpus, embeddings, num_topics, z, y);
  state.z = std::move(z);
  state.y = std::move(y);
  return state;
}

TopicState random_state(const Corpus& corpus, const EmbeddingStore& embeddings, int num_topics,
                        Rng& rng) {
  if (num_topics < 1) throw InvalidArgument("num_topics must be >= 1");
  std::uniform_int_distribution<int> topic(0, num_topics - 1);
  std::vector<std::vector<int>> z(corpus.num_users());
  std::vector<int> y(corpus.num_users());
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    z[u].resize(corpus.docs[u].size());
    for (auto& t : z[u]) t = topic(rng);
    std::uniform_int_distribution<std::size_t> pick(0, z[u].size() - 1);
    y[u] = z[u][pick(rng)];
  }
  return make_state(corpus, embeddings, num_topics, std::move(z), std::move(y));
}

void refresh_stats(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings) {
  state.stats = compute_stats(corpus, embeddings, state.num_topics, state.z, state.y);
}

void remove_token(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings,
                  std::size_t user, std::size_t pos) {
  const int t = state.z[user][pos];
  const auto w = static_cast<std::size_t>(corpus.docs[user][pos]);
  auto& doc_count = state.stats.doc_topic(user, static_cast<std::size_t>(t));
  if (doc_count == 0) throw InvalidState("token already removed");
  state.stats.concepts.remove(t, embeddings.concepts.row(w));
  --doc_count;
  --state.stats.concept_topic(w, static_cast<std::size_t>(t));
}

void add_token(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings,
               std::size_t user, std::size_t pos, int topic) {
  const auto w = static_cast<std::size_t>(corpus.docs[user][pos]);
  state.stats.concepts.add(topic, embeddings.concepts.row(w));
  state.z[user][pos] = topic;
  ++state.stats.doc_topic(user, static_cast<std::size_t>(topic));
  ++state.stats.concept_topic(w, static_cast<std::size_t>(topic));
}

void remove_user(TopicState& state, const EmbeddingStore& embeddings, std::size_t user) {
  state.stats.user.remove(state.y[user], embeddings.users.row(user));
}

void add_user(TopicState& state, const EmbeddingStore& embeddings, std::size_t user, int topic) {
  state.stats.user.add(topic, embeddings.users.row(user));
  state.y[user] = topic;
}

double stats_discrepancy(const TopicSuffStats& a, const TopicSuffStats& b) {
  if (a.doc_topic != b.doc_topic || a.concept_topic != b.concept_topic) return HUGE_VAL;
  return std::max(a.user.max_relative_difference(b.user),
                  a.concepts.max_relative_difference(b.concepts));
}

}  // namespace genvector
