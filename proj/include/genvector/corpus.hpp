#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace genvector {

// Bidirectional concept-name <-> id table. Ids are dense and assigned in
// first-seen order.
class Vocabulary {
 public:
  int intern(std::string_view token);
  std::optional<int> find(std::string_view token) const;
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

// One document of concept tokens per user.
struct Corpus {
  std::vector<std::string> users;
  std::vector<std::vector<int>> docs;  // concept ids, with repetitions, in order
  Vocabulary vocab;

  std::size_t num_users() const noexcept { return users.size(); }
  std::size_t num_concepts() const noexcept { return vocab.size(); }
  std::size_t total_tokens() const;

  // (concept id, n_u^w) for every distinct concept of d_u, ascending by id.
  std::vector<std::pair<int, int>> concept_counts(std::size_t user) const;

  // Appends a user document given by concept names; returns the user index.
  std::size_t add_document(std::string user, const std::vector<std::string>& concepts);

  // Throws InvalidArgument on empty corpus, empty documents, duplicate user
  // ids or out-of-vocabulary tokens.
  void validate() const;

  bool operator==(const Corpus&) const = default;
};

}  // namespace genvector
