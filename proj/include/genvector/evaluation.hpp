#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genvector/predictor.hpp"

namespace genvector {

struct Corpus;

// Mean over users with non-empty truth of |top-k ∩ truth_u| / min(k, |P_u|).
// `truth` is indexed like skg.lists. Throws InvalidArgument if no user is
// evaluable.
double precision_at_k(const SocialKnowledgeGraph& skg,
                      const std::vector<std::vector<int>>& truth, std::size_t k);

// Concepts of d_u by descending frequency, ascending id on ties. Scores are
// the raw counts.
SocialKnowledgeGraph frequency_baseline(const Corpus& corpus, std::size_t k);

// Fraction of agreeing labels under the best one-to-one relabeling of
// `predicted` (Hungarian assignment on the confusion matrix).
double topic_recovery_accuracy(std::span<const int> predicted, std::span<const int> truth,
                               int num_topics);

// Maximum-weight perfect matching on a square matrix; result[row] = column.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace genvector
