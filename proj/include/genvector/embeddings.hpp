#pragma once

#include <cstddef>

#include "genvector/matrix.hpp"

namespace genvector {

struct Corpus;

// Observed user embeddings f^r (one row per user) and concept embeddings f^k
// (one row per vocabulary entry).
struct EmbeddingStore {
  Matrix users;
  Matrix concepts;

  std::size_t user_dim() const noexcept { return users.cols(); }
  std::size_t concept_dim() const noexcept { return concepts.cols(); }

  // Row counts must match the corpus, dims must be >= 1, entries finite.
  void validate(const Corpus& corpus) const;

  bool operator==(const EmbeddingStore&) const = default;
};

}  // namespace genvector
