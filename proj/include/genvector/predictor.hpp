#pragma once

#include <cstddef>
#include <vector>

namespace genvector {

struct TrainedModel;

enum class CandidateSet {
  kDocument,    // distinct concepts of d_u
  kVocabulary,  // every known concept
};

struct RankedConcept {
  int concept_id = 0;
  double score = 0.0;

  bool operator==(const RankedConcept&) const = default;
};

struct SocialKnowledgeGraph {
  std::vector<std::vector<RankedConcept>> lists;  // indexed by user

  bool operator==(const SocialKnowledgeGraph&) const = default;
};

// log sum_t theta_u^t (n_u^w + l) N(f^r_u | mu^r_t, lambda^r_t) N(f^k_w | mu^k_t, lambda^k_t).
// Throws InvalidArgument for unknown indices and for a zero count with l = 0.
double score(const TrainedModel& model, std::size_t user, std::size_t concept_id);

// Top-k by descending score, ascending concept id on ties.
std::vector<RankedConcept> rank_user(const TrainedModel& model, std::size_t user, std::size_t k,
                                     CandidateSet candidates = CandidateSet::kDocument);

SocialKnowledgeGraph build_skg(const TrainedModel& model, std::size_t k,
                               CandidateSet candidates = CandidateSet::kDocument);

}  // namespace genvector
