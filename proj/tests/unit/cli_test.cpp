#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "genvector/cli.hpp"
#include "genvector/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "genvector");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = genvector::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("genvector_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> result;
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

}  // namespace

TEST_CASE("synth, train, predict, eval and baseline") {
  const fs::path dir = scratch("pipeline");
  const std::string d = dir.string();
  REQUIRE(run({"synth", "--users", "40", "--topics", "3", "--vocab", "60", "--tokens-per-doc", "15",
               "--user-dim", "3", "--concept-dim", "3", "--seed", "5", "--out-dir", d})
              .code == 0);
  for (const char* f : {"corpus.jsonl", "user_emb.txt", "concept_emb.txt", "truth.jsonl"})
    CHECK(fs::exists(dir / f));

  const Result train = run({"train", "--corpus", d + "/corpus.jsonl", "--user-emb", d + "/user_emb.txt",
                            "--concept-emb", d + "/concept_emb.txt", "--topics", "3", "--burn-in", "3",
                            "--max-iter", "7", "--latent-iters", "2", "--readout-period", "2",
                            "--freeze-embeddings", "--out", d + "/model.json", "--trace", d + "/trace.csv"});
  REQUIRE_MESSAGE(train.code == 0, train.err);

  const auto trace = lines(dir / "trace.csv");
  REQUIRE(trace.size() == 1 + 4);
  CHECK(trace[0] == "iteration,seconds,log_likelihood");
  CHECK(trace[1].rfind("4,", 0) == 0);

  REQUIRE(run({"predict", "--model", d + "/model.json", "--top-k", "5", "--out", d + "/pred.tsv"}).code == 0);
  std::ifstream pred_in(dir / "pred.tsv");
  const auto predictions = genvector::io::parse_predictions(pred_in, "pred.tsv");
  REQUIRE(predictions.size() == 40);
  for (const auto& [user, ranking] : predictions) {
    CHECK_FALSE(ranking.empty());
    CHECK(ranking.size() <= 5);
  }

  const Result eval = run({"eval", "--pred", d + "/pred.tsv", "--truth", d + "/truth.jsonl", "--k", "5"});
  CHECK(eval.code == 0);
  CHECK(eval.out.rfind("precision@5: ", 0) == 0);

  CHECK(run({"baseline", "--corpus", d + "/corpus.jsonl", "--top-k", "3", "--out", d + "/base.tsv"}).code == 0);
  CHECK(lines(dir / "base.tsv").size() == 40);
  fs::remove_all(dir);
}

TEST_CASE("invalid invocations fail with a diagnostic") {
  const fs::path dir = scratch("errors");
  const std::string d = dir.string();
  REQUIRE(run({"synth", "--users", "10", "--vocab", "20", "--tokens-per-doc", "5", "--out-dir", d}).code == 0);
  const std::vector<std::string> base{"train", "--corpus", d + "/corpus.jsonl", "--user-emb", d + "/user_emb.txt",
                                      "--concept-emb", d + "/concept_emb.txt", "--out", d + "/m.json"};

  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const Result zero = with({"--topics", "0"});
  CHECK(zero.code != 0);
  CHECK(zero.err.find("num_topics") != std::string::npos);
  CHECK(with({"--max-iter", "20", "--burn-in", "20"}).code != 0);
  CHECK(with({"--user-term", "sideways"}).code != 0);
  CHECK(with({"--bogus"}).code != 0);
  CHECK(run({"train", "--corpus", d + "/corpus.jsonl"}).code != 0);
  CHECK(run({}).code != 0);

  const Result missing = run({"predict", "--model", d + "/absent.json", "--out", d + "/p.tsv"});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("absent.json") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"format\": \"genvector-model\", \"format_version\": 1";
  CHECK(run({"predict", "--model", d + "/broken.json", "--out", d + "/p.tsv"}).code != 0);
  CHECK_FALSE(fs::exists(dir / "p.tsv"));

  std::ofstream(dir / "pred.tsv") << "u0\tc1:0.5\n";
  CHECK(run({"eval", "--pred", d + "/pred.tsv", "--truth", d + "/truth.jsonl"}).code != 0);
  fs::remove_all(dir);
}
