#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "genvector/normal_gamma.hpp"

namespace genvector {

struct Corpus;
struct EmbeddingStore;

// Dense integer count table, row-major.
class CountTable {
 public:
  CountTable() = default;
  CountTable(std::size_t rows, std::size_t cols) : cols_(cols), values_(rows * cols, 0) {}

  int& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  int operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::size_t rows() const noexcept { return cols_ == 0 ? 0 : values_.size() / cols_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator==(const CountTable&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<int> values_;
};

struct TopicSuffStats {
  GaussianStats user;      // user embeddings grouped by y
  GaussianStats concepts;  // token concept embeddings grouped by z
  CountTable doc_topic;     // n_u^t
  CountTable concept_topic; // n_w^t

  bool operator==(const TopicSuffStats&) const = default;
};

// Latent assignments plus the statistics kept consistent with them.
struct TopicState {
  int num_topics = 0;
  std::vector<std::vector<int>> z;  // topic per token, parallel to corpus.docs
  std::vector<int> y;               // topic per user
  TopicSuffStats stats;

  bool operator==(const TopicState&) const = default;
};

using Rng = std::mt19937_64;

// Recomputes every statistic from z, y and the current embeddings.
TopicSuffStats compute_stats(const Corpus& corpus, const EmbeddingStore& embeddings,
                             int num_topics, const std::vector<std::vector<int>>& z,
                             const std::vector<int>& y);

// Validates assignment shapes and topic ranges, then builds the stats.
TopicState make_state(const Corpus& corpus, const EmbeddingStore& embeddings, int num_topics,
                      std::vector<std::vector<int>> z, std::vector<int> y);

// z uniform over topics; y drawn uniformly from the initial z's of its document.
TopicState random_state(const Corpus& corpus, const EmbeddingStore& embeddings, int num_topics,
                        Rng& rng);

void refresh_stats(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings);

// Incremental moves. remove_* leave the item's assignment in place but drop
// it from every statistic; add_* sets the assignment and restores the stats.
void remove_token(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings,
                  std::size_t user, std::size_t pos);
void add_token(TopicState& state, const Corpus& corpus, const EmbeddingStore& embeddings,
               std::size_t user, std::size_t pos, int topic);
void remove_user(TopicState& state, const EmbeddingStore& embeddings, std::size_t user);
void add_user(TopicState& state, const EmbeddingStore& embeddings, std::size_t user, int topic);

// Largest relative field difference between two stat sets; counts compared exactly
// (any mismatch returns +inf).
double stats_discrepancy(const TopicSuffStats& a, const TopicSuffStats& b);

}  // namespace genvector
