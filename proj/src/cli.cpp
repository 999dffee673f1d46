#include "genvector/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "genvector/error.hpp"
#include "genvector/evaluation.hpp"
#include "genvector/io.hpp"
#include "genvector/predictor.hpp"
#include "genvector/sampler.hpp"
#include "genvector/synthetic.hpp"

namespace genvector::cli {

namespace {

namespace fs = std::filesystem;

struct TrainArgs {
  std::string corpus, user_emb, concept_emb, out, trace, user_term = "printed";
  Hyperparameters hyper;
  bool freeze_embeddings = false;
};

struct PredictArgs {
  std::string model, out;
  std::size_t top_k = 5;
  bool full_vocab = false;
};

struct EvalArgs {
  std::string pred, truth;
  std::size_t k = 5;
};

struct SynthArgs {
  SyntheticConfig config;
  std::string out_dir;
};

struct BaselineArgs {
  std::string corpus, out;
  std::size_t top_k = 5;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

void run_train(TrainArgs& args, std::ostream& out) {
  args.hyper.update_embeddings = !args.freeze_embeddings;
  args.hyper.user_term = user_term_form_from_string(args.user_term);
  args.hyper.validate();

  Corpus corpus = io::load_corpus(args.corpus);
  EmbeddingStore embeddings;
  embeddings.users = io::load_embeddings(args.user_emb, corpus.users);
  embeddings.concepts = io::load_embeddings(args.concept_emb, corpus.vocab.names());

  const TrainedModel model = run_inference(std::move(corpus), std::move(embeddings), args.hyper);
  io::save_model(model, args.out);
  if (!args.trace.empty()) {
    auto trace = open_output(args.trace);
    io::write_trace(trace, model.trace);
  }
  out << "trained " << model.corpus.num_users() << " users, " << model.corpus.num_concepts()
      << " concepts, " << model.hyper.num_topics << " topics; final log-likelihood "
      << (model.trace.empty() ? 0.0 : model.trace.back().log_likelihood) << '\n';
}

void run_predict(const PredictArgs& args) {
  const TrainedModel model = io::load_model(args.model);
  const auto skg = build_skg(model, args.top_k,
                             args.full_vocab ? CandidateSet::kVocabulary : CandidateSet::kDocument);
  auto out = open_output(args.out);
  io::write_predictions(out, skg, model.corpus);
}

void run_eval(const EvalArgs& args, std::ostream& out) {
  auto pred_in = open_input(args.pred);
  auto truth_in = open_input(args.truth);
  const auto predictions = io::parse_predictions(pred_in, args.pred);
  const auto truth = io::parse_truth(truth_in, args.truth);

  Vocabulary names;
  std::unordered_map<std::string, std::size_t> user_index;
  SocialKnowledgeGraph skg;
  for (const auto& [user, ranking] : predictions) {
    user_index.emplace(user, skg.lists.size());
    auto& list = skg.lists.emplace_back();
    for (const auto& [concept_name, score] : ranking) list.push_back({names.intern(concept_name), score});
  }
  std::vector<std::vector<int>> relevant(skg.lists.size());
  for (const auto& [user, concepts] : truth) {
    if (concepts.empty()) continue;
    const auto it = user_index.find(user);
    if (it == user_index.end()) throw Error("user '" + user + "' in truth file has no predictions");
    for (const auto& c : concepts) relevant[it->second].push_back(names.intern(c));
  }
  out << "precision@" << args.k << ": " << io::format_double(precision_at_k(skg, relevant, args.k))
      << '\n';
}

void run_synth(const SynthArgs& args, std::ostream& out) {
  const auto data = generate_synthetic(args.config);
  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + args.out_dir + "': " + ec.message());
  io::save_corpus(data.corpus, dir / "corpus.jsonl");
  io::save_embeddings(dir / "user_emb.txt", data.corpus.users, data.embeddings.users);
  io::save_embeddings(dir / "concept_emb.txt", data.corpus.vocab.names(), data.embeddings.concepts);
  auto truth = open_output((dir / "truth.jsonl").string());
  io::write_truth(truth, data.corpus, data.truth);
  out << "wrote " << data.corpus.num_users() << " users and " << data.corpus.num_concepts()
      << " concepts to " << dir.string() << '\n';
}

void run_baseline(const BaselineArgs& args) {
  const Corpus corpus = io::load_corpus(args.corpus);
  const auto skg = frequency_baseline(corpus, args.top_k);
  auto out = open_output(args.out);
  io::write_predictions(out, skg, corpus);
}

// Registers --<prefix>alpha0 etc.; each value is applied to every target prior.
void add_prior_options(CLI::App& cmd, const std::string& prefix,
                       std::vector<NormalGammaPrior*> targets, const std::string& scope) {
  auto add = [&](const std::string& name, double NormalGammaPrior::*field, const std::string& help) {
    cmd.add_option_function<double>(
           "--" + prefix + name,
           [targets, field](double v) {
             for (NormalGammaPrior* p : targets) p->*field = v;
           },
           help + " (" + scope + ")")
        ->default_str(io::format_double(targets.front()->*field));
  };
  add("alpha0", &NormalGammaPrior::alpha0, "Normal-gamma shape");
  add("beta0", &NormalGammaPrior::beta0, "Normal-gamma rate");
  add("kappa0", &NormalGammaPrior::kappa0, "Normal-gamma mean pseudo-count");
  add("mu0", &NormalGammaPrior::mu0, "Normal-gamma prior mean");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"genvector: topic model over user and concept embeddings, ranks concepts per user"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit the model and write a snapshot");
  train_cmd->add_option("--corpus", train.corpus, "Corpus JSONL file")->required();
  train_cmd->add_option("--user-emb", train.user_emb, "User embeddings (word2vec text)")->required();
  train_cmd->add_option("--concept-emb", train.concept_emb, "Concept embeddings (word2vec text)")
      ->required();
  train_cmd->add_option("--topics", train.hyper.num_topics, "Number of topics T")
      ->capture_default_str();
  train_cmd->add_option("--alpha", train.hyper.alpha, "Dirichlet concentration")
      ->capture_default_str();
  train_cmd->add_option("--laplace", train.hyper.laplace, "Laplace smoothing l")
      ->capture_default_str();
  train_cmd->add_option("--burn-in", train.hyper.burn_in, "Burn-in outer iterations t_b")
      ->capture_default_str();
  train_cmd->add_option("--max-iter", train.hyper.max_iter, "Outer iterations t_m")
      ->capture_default_str();
  train_cmd->add_option("--latent-iters", train.hyper.latent_iters, "Sweeps per outer iteration t_l")
      ->capture_default_str();
  train_cmd->add_option("--readout-period", train.hyper.readout_period, "Sweeps between read-outs t_p")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.hyper.embed_lr, "Embedding gradient step size")
      ->capture_default_str();
  train_cmd->add_option("--embed-steps", train.hyper.embed_steps, "Gradient steps per update")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.hyper.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--threads", train.hyper.threads, "Sampler worker threads")
      ->capture_default_str();
  train_cmd->add_option("--user-term", train.user_term, "Likelihood user term: printed|assigned")
      ->capture_default_str();
  train_cmd->add_flag("--freeze-embeddings", train.freeze_embeddings,
                      "Skip embedding updates (fixed-embedding variant)");
  add_prior_options(*train_cmd, "", {&train.hyper.user_prior, &train.hyper.concept_prior},
                    "both modalities");
  train_cmd->add_option("--out", train.out, "Model snapshot path")->required();
  train_cmd->add_option("--trace", train.trace, "Likelihood trace CSV path");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Rank concepts per user");
  predict_cmd->add_option("--model", predict.model, "Model snapshot")->required();
  predict_cmd->add_option("--top-k", predict.top_k, "List length k")->capture_default_str();
  predict_cmd->add_flag("--full-vocab", predict.full_vocab, "Rank every known concept");
  predict_cmd->add_option("--out", predict.out, "Prediction file")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Precision@k of a prediction file");
  eval_cmd->add_option("--pred", eval.pred, "Prediction file")->required();
  eval_cmd->add_option("--truth", eval.truth, "Truth JSONL file")->required();
  eval_cmd->add_option("--k", eval.k, "Cut-off k")->capture_default_str();

  SynthArgs synth;
  auto& cfg = synth.config;
  auto* synth_cmd = app.add_subcommand("synth", "Sample a synthetic dataset");
  synth_cmd->add_option("--users", cfg.num_users)->capture_default_str();
  synth_cmd->add_option("--topics", cfg.num_topics)->capture_default_str();
  synth_cmd->add_option("--vocab", cfg.vocab_size)->capture_default_str();
  synth_cmd->add_option("--tokens-per-doc", cfg.tokens_per_doc)->capture_default_str();
  synth_cmd->add_option("--user-dim", cfg.user_dim)->capture_default_str();
  synth_cmd->add_option("--concept-dim", cfg.concept_dim)->capture_default_str();
  synth_cmd->add_option("--separation", cfg.separation)->capture_default_str();
  synth_cmd->add_option("--alpha", cfg.alpha)->capture_default_str();
  synth_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  add_prior_options(*synth_cmd, "gen-user-", {&cfg.user_prior}, "generator, user topics");
  add_prior_options(*synth_cmd, "gen-concept-", {&cfg.concept_prior}, "generator, concept topics");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();

  BaselineArgs baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Frequency baseline rankings");
  baseline_cmd->add_option("--corpus", baseline.corpus, "Corpus JSONL file")->required();
  baseline_cmd->add_option("--top-k", baseline.top_k, "List length k")->capture_default_str();
  baseline_cmd->add_option("--out", baseline.out, "Prediction file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train_cmd) {
      run_train(train, out);
    } else if (*predict_cmd) {
      run_predict(predict);
    } else if (*eval_cmd) {
      run_eval(eval, out);
    } else if (*synth_cmd) {
      run_synth(synth, out);
    } else if (*baseline_cmd) {
      run_baseline(baseline);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace genvector::cli
