#include "genvector/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "genvector/error.hpp"
#include "genvector/sampler.hpp"

namespace genvector {

namespace {

struct TopicGaussians {
  Matrix mu;
  Matrix lambda;
};

bool separated(const TopicGaussians& g, double separation) {
  const std::size_t topics = g.mu.rows();
  for (std::size_t a = 0; a < topics; ++a) {
    for (std::size_t b = a + 1; b < topics; ++b) {
      double dist2 = 0.0;
      double min_lambda = HUGE_VAL;
      for (std::size_t e = 0; e < g.mu.cols(); ++e) {
        const double d = g.mu(a, e) - g.mu(b, e);
        dist2 += d * d;
        min_lambda = std::min({min_lambda, g.lambda(a, e), g.lambda(b, e)});
      }
      // distance / sigma_max >= separation
      if (dist2 * min_lambda < separation * separation) return false;
    }
  }
  return true;
}

TopicGaussians draw_topics(const NormalGammaPrior& prior, int topics, int dims, double separation,
                           int max_attempts, Rng& rng, const char* modality) {
  TopicGaussians g{Matrix(static_cast<std::size_t>(topics), static_cast<std::size_t>(dims)),
                   Matrix(static_cast<std::size_t>(topics), static_cast<std::size_t>(dims))};
  std::gamma_distribution<double> precision(prior.alpha0, 1.0 / prior.beta0);
  std::normal_distribution<double> standard(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t t = 0; t < g.mu.rows(); ++t) {
      for (std::size_t e = 0; e < g.mu.cols(); ++e) {
        const double lambda = precision(rng);
        g.lambda(t, e) = lambda;
        g.mu(t, e) = prior.mu0 + standard(rng) / std::sqrt(prior.kappa0 * lambda);
      }
    }
    if (separated(g, separation)) return g;
  }
  throw InvalidArgument(std::string("could not reach the requested ") + modality +
                        " topic separation in " + std::to_string(max_attempts) + " attempts");
}

void draw_point(std::span<double> out, std::span<const double> mu, std::span<const double> lambda,
                Rng& rng) {
  std::normal_distribution<double> standard(0.0, 1.0);
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = mu[e] + standard(rng) / std::sqrt(lambda[e]);
}

}  // namespace

void SyntheticConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("invalid synthetic config: ") + what);
  };
  require(num_users >= 1, "num_users must be >= 1");
  require(num_topics >= 1, "num_topics must be >= 1");
  require(vocab_size >= num_topics, "vocab_size must be >= num_topics");
  require(tokens_per_doc >= 1, "tokens_per_doc must be >= 1");
  require(user_dim >= 1 && concept_dim >= 1, "embedding dims must be >= 1");
  require(std::isfinite(separation) && separation > 0.0, "separation must be > 0");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  require(max_attempts >= 1, "max_attempts must be >= 1");
  user_prior.validate("user_prior");
  concept_prior.validate("concept_prior");
}

SyntheticData generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const auto topics = static_cast<std::size_t>(config.num_topics);

  const auto user_g = draw_topics(config.user_prior, config.num_topics, config.user_dim,
                                  config.separation, config.max_attempts, rng, "user");
  const auto concept_g = draw_topics(config.concept_prior, config.num_topics, config.concept_dim,
                                     config.separation, config.max_attempts, rng, "concept");

  // Balanced random topic per knowledge-base concept, one embedding each.
  const auto kb_size = static_cast<std::size_t>(config.vocab_size);
  std::vector<int> kb_topic(kb_size);
  for (std::size_t w = 0; w < kb_size; ++w) kb_topic[w] = static_cast<int>(w % topics);
  std::shuffle(kb_topic.begin(), kb_topic.end(), rng);
  Matrix kb_embedding(kb_size, static_cast<std::size_t>(config.concept_dim));
  std::vector<std::vector<int>> by_topic(topics);
  for (std::size_t w = 0; w < kb_size; ++w) {
    const auto t = static_cast<std::size_t>(kb_topic[w]);
    draw_point(kb_embedding.row(w), concept_g.mu.row(t), concept_g.lambda.row(t), rng);
    by_topic[t].push_back(static_cast<int>(w));
  }

  SyntheticData data;
  auto& corpus = data.corpus;
  auto& truth = data.truth;
  Matrix user_embedding(static_cast<std::size_t>(config.num_users),
                        static_cast<std::size_t>(config.user_dim));
  std::gamma_distribution<double> dirichlet_part(config.alpha, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> theta(topics);

  for (int u = 0; u < config.num_users; ++u) {
    double total = 0.0;
    for (auto& p : theta) total += (p = dirichlet_part(rng));
    if (total > 0.0) {
      for (auto& p : theta) p /= total;
    } else {
      std::fill(theta.begin(), theta.end(), 1.0 / static_cast<double>(topics));
    }

    std::vector<int> z(static_cast<std::size_t>(config.tokens_per_doc));
    std::vector<std::string> names;
    names.reserve(z.size());
    for (auto& t : z) {
      t = sample_categorical(theta, unit(rng));
      const auto& pool = by_topic[static_cast<std::size_t>(t)];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      names.push_back("c" + std::to_string(pool[pick(rng)]));
    }
    std::uniform_int_distribution<std::size_t> pick_y(0, z.size() - 1);
    const int y = z[pick_y(rng)];
    const auto uu = static_cast<std::size_t>(u);
    draw_point(user_embedding.row(uu), user_g.mu.row(static_cast<std::size_t>(y)),
               user_g.lambda.row(static_cast<std::size_t>(y)), rng);

    corpus.add_document("u" + std::to_string(u), names);
    truth.z.push_back(std::move(z));
    truth.y.push_back(y);
  }

  // Align concept tables with the corpus vocabulary (first-seen order).
  data.embeddings.users = std::move(user_embedding);
  data.embeddings.concepts = Matrix(corpus.num_concepts(), static_cast<std::size_t>(config.concept_dim));
  truth.concept_topic.resize(corpus.num_concepts());
  for (std::size_t id = 0; id < corpus.num_concepts(); ++id) {
    const auto kb = static_cast<std::size_t>(std::stoul(corpus.vocab.name(static_cast<int>(id)).substr(1)));
    truth.concept_topic[id] = kb_topic[kb];
    std::copy_n(kb_embedding.row(kb).begin(), config.concept_dim, data.embeddings.concepts.row(id).begin());
  }
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    std::vector<int> relevant;
    for (const auto& [w, n] : corpus.concept_counts(u)) {
      if (truth.concept_topic[static_cast<std::size_t>(w)] == truth.y[u]) relevant.push_back(w);
    }
    truth.relevant.push_back(std::move(relevant));
  }
  truth.user_mu = user_g.mu;
  truth.user_lambda = user_g.lambda;
  truth.concept_mu = concept_g.mu;
  truth.concept_lambda = concept_g.lambda;
  return data;
}

}  // namespace genvector
