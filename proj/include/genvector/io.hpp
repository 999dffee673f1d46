#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genvector/corpus.hpp"
#include "genvector/matrix.hpp"
#include "genvector/predictor.hpp"
#include "genvector/sampler.hpp"
#include "genvector/synthetic.hpp"

namespace genvector::io {

inline constexpr int kModelFormatVersion = 1;

// Corpus: one JSON object per line, {"user": "<id>", "concepts": ["<c>", ...]}.
Corpus parse_corpus(std::istream& in, const std::string& source);
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// word2vec text format: "count dim" header, then "token v1 ... v_dim" rows.
// Rows come back in the order of `expected`; extra tokens are ignored.
Matrix parse_embeddings(std::istream& in, const std::string& source,
                        std::span<const std::string> expected);
Matrix load_embeddings(const std::filesystem::path& path, std::span<const std::string> expected);
void write_embeddings(std::ostream& out, std::span<const std::string> names, const Matrix& values);
void save_embeddings(const std::filesystem::path& path, std::span<const std::string> names,
                     const Matrix& values);

// Model snapshot (JSON container with named arrays and a format version).
void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in, const std::string& source);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Predictions: "<user>\t<concept>:<score>,<concept>:<score>,..." per line.
using NamedRanking = std::pair<std::string, std::vector<std::pair<std::string, double>>>;
void write_predictions(std::ostream& out, const SocialKnowledgeGraph& skg, const Corpus& corpus);
std::vector<NamedRanking> parse_predictions(std::istream& in, const std::string& source);

// Truth sets: {"user": "<id>", "concepts": [...]} per line (extra keys ignored).
using NamedSet = std::pair<std::string, std::vector<std::string>>;
std::vector<NamedSet> parse_truth(std::istream& in, const std::string& source);
// Writes relevant concepts plus the true user topic ("topic") and token topics ("z").
void write_truth(std::ostream& out, const Corpus& corpus, const GroundTruth& truth);

// "iteration,seconds,log_likelihood" CSV.
void write_trace(std::ostream& out, std::span<const TracePoint> trace);

// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace genvector::io
