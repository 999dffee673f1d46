#include "genvector/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "genvector/embeddings.hpp"
#include "genvector/error.hpp"

namespace genvector {

int Vocabulary::intern(std::string_view token) {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.emplace_back(token);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::size_t Corpus::total_tokens() const {
  std::size_t total = 0;
  for (const auto& doc : docs) total += doc.size();
  return total;
}

std::vector<std::pair<int, int>> Corpus::concept_counts(std::size_t user) const {
  std::vector<int> ids = docs.at(user);
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<int, int>> counts;
  for (int id : ids) {
    if (!counts.empty() && counts.back().first == id) {
      ++counts.back().second;
    } else {
      counts.emplace_back(id, 1);
    }
  }
  return counts;
}

std::size_t Corpus::add_document(std::string user, const std::vector<std::string>& concepts) {
  std::vector<int> doc;
  doc.reserve(concepts.size());
  for (const auto& c : concepts) doc.push_back(vocab.intern(c));
  users.push_back(std::move(user));
  docs.push_back(std::move(doc));
  return users.size() - 1;
}

void Corpus::validate() const {
  if (users.empty()) throw InvalidArgument("corpus has no users");
  if (users.size() != docs.size()) throw InvalidArgument("corpus users/docs size mismatch");
  std::unordered_set<std::string> seen;
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!seen.insert(users[u]).second) throw InvalidArgument("duplicate user id '" + users[u] + "'");
    if (docs[u].empty()) throw InvalidArgument("user '" + users[u] + "' has an empty document");
    for (int id : docs[u]) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab.size()) {
        throw InvalidArgument("user '" + users[u] + "' references unknown concept id " +
                              std::to_string(id));
      }
    }
  }
}

void EmbeddingStore::validate(const Corpus& corpus) const {
  if (users.rows() != corpus.num_users()) {
    throw InvalidArgument("user embeddings have " + std::to_string(users.rows()) +
                          " rows, corpus has " + std::to_string(corpus.num_users()) + " users");
  }
  if (concepts.rows() != corpus.num_concepts()) {
    throw InvalidArgument("concept embeddings have " + std::to_string(concepts.rows()) +
                          " rows, vocabulary has " + std::to_string(corpus.num_concepts()) +
                          " concepts");
  }
  if (users.cols() == 0 || concepts.cols() == 0) {
    throw InvalidArgument("embedding dimensions must be >= 1");
  }
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(users.values()) || !finite(concepts.values())) {
    throw InvalidArgument("embeddings contain non-finite values");
  }
}

}  // namespace genvector
