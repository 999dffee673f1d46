#include <doctest.h>

#include <random>

#include "genvector/corpus.hpp"
#include "genvector/error.hpp"
#include "genvector/evaluation.hpp"

using namespace genvector;

namespace {

SocialKnowledgeGraph graph(std::vector<std::vector<int>> ids) {
  SocialKnowledgeGraph g;
  for (auto& list : ids) {
    std::vector<RankedConcept> row;
    for (int id : list) row.push_back({id, 0.0});
    g.lists.push_back(row);
  }
  return g;
}

}  // namespace

TEST_CASE("precision at k") {
  CHECK(precision_at_k(graph({{1, 2}, {3}}), {{1, 2}, {3}}, 5) == 1.0);
  CHECK(precision_at_k(graph({{1, 2}}), {{7, 8}}, 5) == 0.0);
  CHECK(precision_at_k(graph({{9, 1, 8, 7, 6}}), {{1, 2, 3, 4, 5, 10}}, 5) == doctest::Approx(0.2));
  // Users without truth are skipped.
  CHECK(precision_at_k(graph({{1}, {4}}), {{1}, {}}, 5) == 1.0);
  CHECK_THROWS_AS(precision_at_k(graph({{1}}), {{}}, 5), InvalidArgument);
}

TEST_CASE("frequency baseline") {
  Corpus c;
  c.add_document("u", {"a", "a", "b"});
  c.add_document("v", {"b", "c", "a"});
  const auto g = frequency_baseline(c, 5);
  REQUIRE(g.lists[0].size() == 2);
  CHECK(g.lists[0][0].concept_id == 0);
  CHECK(g.lists[0][0].score == 2.0);
  CHECK(g.lists[0][1].concept_id == 1);
  // Ties fall back to ascending id.
  REQUIRE(g.lists[1].size() == 3);
  CHECK(g.lists[1][0].concept_id == 0);
  CHECK(g.lists[1][1].concept_id == 1);
  CHECK(g.lists[1][2].concept_id == 2);
  CHECK(frequency_baseline(c, 1).lists[1].size() == 1);
}

TEST_CASE("topic recovery is permutation invariant") {
  const std::vector<int> truth{0, 0, 1, 2, 2, 1, 0};
  CHECK(topic_recovery_accuracy(truth, truth, 3) == 1.0);
  std::vector<int> permuted;
  for (int t : truth) permuted.push_back((t + 1) % 3);
  CHECK(topic_recovery_accuracy(permuted, truth, 3) == 1.0);
  const std::vector<int> one_off{1, 1, 0, 2, 2, 0, 2};
  CHECK(topic_recovery_accuracy(one_off, truth, 3) == doctest::Approx(6.0 / 7.0));
  CHECK_THROWS_AS(topic_recovery_accuracy(std::vector<int>{0}, truth, 3), InvalidArgument);
}

TEST_CASE("random labels recover about one in T") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> pick(0, 4);
  std::vector<int> a(200000), b(200000);
  for (auto& v : a) v = pick(rng);
  for (auto& v : b) v = pick(rng);
  CHECK(topic_recovery_accuracy(a, b, 5) == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("assignment solver matches brute force") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::vector<std::vector<double>> w(n, std::vector<double>(n));
    for (auto& row : w)
      for (auto& v : row) v = unit(rng);
    std::vector<int> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    double best = -1.0;
    do {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += w[i][static_cast<std::size_t>(perm[i])];
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto got = max_weight_assignment(w);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i][static_cast<std::size_t>(got[i])];
    CHECK(s == doctest::Approx(best).epsilon(1e-12));
  }
}
