#include "genvector/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "genvector/error.hpp"

namespace genvector::io {

namespace {

using nlohmann::json;

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) parts.push_back(line.substr(i, j - i));
    i = j;
  }
  return parts;
}

// {"user": "...", "concepts": [...]} with validated token shapes.
NamedSet parse_record(const std::string& line, const std::string& source, std::size_t line_no,
                      bool allow_empty) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(source, line_no, "record is not a JSON object");
  const auto user = record.find("user");
  const auto concepts = record.find("concepts");
  if (user == record.end() || !user->is_string()) {
    throw ParseError(source, line_no, "missing string field \"user\"");
  }
  if (concepts == record.end() || !concepts->is_array()) {
    throw ParseError(source, line_no, "missing array field \"concepts\"");
  }
  NamedSet out{user->get<std::string>(), {}};
  if (out.first.empty() || has_space(out.first)) {
    throw ParseError(source, line_no, "user id must be non-empty without whitespace");
  }
  for (const auto& c : *concepts) {
    if (!c.is_string()) throw ParseError(source, line_no, "concept tokens must be strings");
    auto token = c.get<std::string>();
    if (token.empty() || has_space(token) || token.find(',') != std::string::npos) {
      throw ParseError(source, line_no,
                       "invalid concept token '" + token + "' (empty, whitespace or comma)");
    }
    out.second.push_back(std::move(token));
  }
  if (out.second.empty() && !allow_empty) {
    throw ParseError(source, line_no, "user '" + out.first + "' has an empty document");
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()},
              {"data", std::vector<double>(m.values().begin(), m.values().end())}};
}

Matrix matrix_from_json(const json& j, const char* name) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw Error(std::string("array '") + name + "' has the wrong number of elements");
  }
  Matrix m(rows, cols);
  auto values = m.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!data[i].is_number()) throw Error(std::string("array '") + name + "' is not numeric");
    values[i] = data[i].get<double>();
  }
  return m;
}

json prior_to_json(const NormalGammaPrior& p) {
  return json{{"alpha0", p.alpha0}, {"beta0", p.beta0}, {"kappa0", p.kappa0}, {"mu0", p.mu0}};
}

NormalGammaPrior prior_from_json(const json& j) {
  return {j.at("alpha0").get<double>(), j.at("beta0").get<double>(), j.at("kappa0").get<double>(),
          j.at("mu0").get<double>()};
}

json hyper_to_json(const Hyperparameters& h) {
  return json{{"user_prior", prior_to_json(h.user_prior)},
              {"concept_prior", prior_to_json(h.concept_prior)},
              {"alpha", h.alpha},
              {"laplace", h.laplace},
              {"num_topics", h.num_topics},
              {"burn_in", h.burn_in},
              {"max_iter", h.max_iter},
              {"latent_iters", h.latent_iters},
              {"readout_period", h.readout_period},
              {"embed_lr", h.embed_lr},
              {"embed_steps", h.embed_steps},
              {"update_embeddings", h.update_embeddings},
              {"user_term", std::string(to_string(h.user_term))},
              {"seed", h.seed},
              {"threads", h.threads}};
}

Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.user_prior = prior_from_json(j.at("user_prior"));
  h.concept_prior = prior_from_json(j.at("concept_prior"));
  h.alpha = j.at("alpha").get<double>();
  h.laplace = j.at("laplace").get<double>();
  h.num_topics = j.at("num_topics").get<int>();
  h.burn_in = j.at("burn_in").get<int>();
  h.max_iter = j.at("max_iter").get<int>();
  h.latent_iters = j.at("latent_iters").get<int>();
  h.readout_period = j.at("readout_period").get<int>();
  h.embed_lr = j.at("embed_lr").get<double>();
  h.embed_steps = j.at("embed_steps").get<int>();
  h.update_embeddings = j.at("update_embeddings").get<bool>();
  h.user_term = user_term_form_from_string(j.at("user_term").get<std::string>());
  h.seed = j.at("seed").get<std::uint64_t>();
  h.threads = j.at("threads").get<int>();
  return h;
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(std::string("array '") + name + "' has an unexpected shape");
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buffer.data(), ptr);
}

Corpus parse_corpus(std::istream& in, const std::string& source) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto [user, concepts] = parse_record(line, source, line_no, false);
    if (!seen.insert(user).second) {
      throw ParseError(source, line_no, "duplicate user id '" + user + "'");
    }
    corpus.add_document(std::move(user), concepts);
  }
  if (corpus.users.empty()) throw ParseError(source, 0, "corpus contains no records");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    json concepts = json::array();
    for (int id : corpus.docs[u]) concepts.push_back(corpus.vocab.name(id));
    out << json{{"user", corpus.users[u]}, {"concepts", std::move(concepts)}}.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_corpus(out, corpus);
  finish(out, path);
}

Matrix parse_embeddings(std::istream& in, const std::string& source,
                        std::span<const std::string> expected) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_rows = 0;
  std::size_t dim = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto parts = split_whitespace(line);
    auto parse_count = [&](std::string_view text, std::size_t& out) {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
      return ec == std::errc() && ptr == text.data() + text.size();
    };
    if (parts.size() != 2 || !parse_count(parts[0], declared_rows) || !parse_count(parts[1], dim) ||
        dim == 0) {
      throw ParseError(source, line_no, "expected header \"<count> <dim>\" with dim >= 1");
    }
    have_header = true;
  }
  if (!have_header) throw ParseError(source, 0, "missing header line");

  std::unordered_map<std::string, std::vector<double>> rows;
  std::size_t found = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto parts = split_whitespace(line);
    if (parts.size() != dim + 1) {
      throw ParseError(source, line_no,
                       "expected a token and " + std::to_string(dim) + " values, found " +
                           std::to_string(parts.size() - 1) + " values");
    }
    std::vector<double> values(dim);
    for (std::size_t e = 0; e < dim; ++e) {
      const auto v = parse_number(parts[e + 1]);
      if (!v) {
        throw ParseError(source, line_no, "non-numeric value '" + std::string(parts[e + 1]) + "'");
      }
      values[e] = *v;
    }
    if (!rows.emplace(std::string(parts[0]), std::move(values)).second) {
      throw ParseError(source, line_no, "duplicate token '" + std::string(parts[0]) + "'");
    }
    ++found;
  }
  if (found != declared_rows) {
    throw ParseError(source, 0,
                     "header declares " + std::to_string(declared_rows) + " rows, found " +
                         std::to_string(found));
  }

  Matrix out(expected.size(), dim);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto it = rows.find(expected[i]);
    if (it == rows.end()) throw ParseError(source, 0, "missing embedding for token '" + expected[i] + "'");
    std::copy(it->second.begin(), it->second.end(), out.row(i).begin());
  }
  return out;
}

Matrix load_embeddings(const std::filesystem::path& path, std::span<const std::string> expected) {
  auto in = open_input(path);
  return parse_embeddings(in, path.string(), expected);
}

void write_embeddings(std::ostream& out, std::span<const std::string> names, const Matrix& values) {
  if (names.size() != values.rows()) throw InvalidArgument("names and embedding rows differ");
  out << values.rows() << ' ' << values.cols() << '\n';
  for (std::size_t i = 0; i < values.rows(); ++i) {
    out << names[i];
    for (double v : values.row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
}

void save_embeddings(const std::filesystem::path& path, std::span<const std::string> names,
                     const Matrix& values) {
  auto out = open_output(path);
  write_embeddings(out, names, values);
  finish(out, path);
}

void write_model(std::ostream& out, const TrainedModel& model) {
  json trace = json::array();
  for (const auto& p : model.trace) trace.push_back({p.iteration, p.seconds, p.log_likelihood});
  const json doc{
      {"format", "genvector-model"},
      {"format_version", kModelFormatVersion},
      {"hyperparameters", hyper_to_json(model.hyper)},
      {"users", model.corpus.users},
      {"vocab", model.corpus.vocab.names()},
      {"docs", model.corpus.docs},
      {"params",
       {{"theta", matrix_to_json(model.params.theta)},
        {"user_mu", matrix_to_json(model.params.user_mu)},
        {"user_lambda", matrix_to_json(model.params.user_lambda)},
        {"concept_mu", matrix_to_json(model.params.concept_mu)},
        {"concept_lambda", matrix_to_json(model.params.concept_lambda)}}},
      {"z", model.state.z},
      {"y", model.state.y},
      {"user_embeddings", matrix_to_json(model.embeddings.users)},
      {"concept_embeddings", matrix_to_json(model.embeddings.concepts)},
      {"burn_in_log_likelihood", model.burn_in_log_likelihood},
      {"trace", std::move(trace)},
  };
  out << doc.dump() << '\n';
}

TrainedModel read_model(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, std::string("malformed model file: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", std::string()) != "genvector-model") {
      throw Error("not a genvector model file");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error("unsupported model format_version " + std::to_string(version) + " (expected " +
                  std::to_string(kModelFormatVersion) + ")");
    }
    TrainedModel model;
    model.hyper = hyper_from_json(doc.at("hyperparameters"));
    model.hyper.validate();

    auto& corpus = model.corpus;
    for (const auto& name : doc.at("vocab")) corpus.vocab.intern(name.get<std::string>());
    if (corpus.vocab.size() != doc.at("vocab").size()) throw Error("duplicate vocabulary entries");
    corpus.users = doc.at("users").get<std::vector<std::string>>();
    corpus.docs = doc.at("docs").get<std::vector<std::vector<int>>>();
    corpus.validate();

    const auto& params = doc.at("params");
    model.params.theta = matrix_from_json(params.at("theta"), "theta");
    model.params.user_mu = matrix_from_json(params.at("user_mu"), "user_mu");
    model.params.user_lambda = matrix_from_json(params.at("user_lambda"), "user_lambda");
    model.params.concept_mu = matrix_from_json(params.at("concept_mu"), "concept_mu");
    model.params.concept_lambda = matrix_from_json(params.at("concept_lambda"), "concept_lambda");
    model.embeddings.users = matrix_from_json(doc.at("user_embeddings"), "user_embeddings");
    model.embeddings.concepts = matrix_from_json(doc.at("concept_embeddings"), "concept_embeddings");
    model.embeddings.validate(corpus);

    const auto topics = static_cast<std::size_t>(model.hyper.num_topics);
    require_shape(model.params.theta, corpus.num_users(), topics, "theta");
    require_shape(model.params.user_mu, topics, model.embeddings.user_dim(), "user_mu");
    require_shape(model.params.user_lambda, topics, model.embeddings.user_dim(), "user_lambda");
    require_shape(model.params.concept_mu, topics, model.embeddings.concept_dim(), "concept_mu");
    require_shape(model.params.concept_lambda, topics, model.embeddings.concept_dim(),
                  "concept_lambda");
    for (const Matrix* m : {&model.params.user_lambda, &model.params.concept_lambda}) {
      const auto v = m->values();
      if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; })) {
        throw Error("precision arrays must be finite and positive");
      }
    }

    model.state = make_state(corpus, model.embeddings, model.hyper.num_topics,
                             doc.at("z").get<std::vector<std::vector<int>>>(),
                             doc.at("y").get<std::vector<int>>());
    model.burn_in_log_likelihood = doc.at("burn_in_log_likelihood").get<double>();
    for (const auto& p : doc.at("trace")) {
      model.trace.push_back({p.at(0).get<int>(), p.at(1).get<double>(), p.at(2).get<double>()});
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("invalid model file: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source, 0, std::string("invalid model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_model(out, model);
  finish(out, path);
}

TrainedModel load_model(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_model(in, path.string());
}

void write_predictions(std::ostream& out, const SocialKnowledgeGraph& skg, const Corpus& corpus) {
  if (skg.lists.size() != corpus.num_users()) {
    throw InvalidArgument("graph and corpus cover different user counts");
  }
  for (std::size_t u = 0; u < skg.lists.size(); ++u) {
    out << corpus.users[u] << '\t';
    for (std::size_t i = 0; i < skg.lists[u].size(); ++i) {
      if (i > 0) out << ',';
      out << corpus.vocab.name(skg.lists[u][i].concept_id) << ':'
          << format_double(skg.lists[u][i].score);
    }
    out << '\n';
  }
}

std::vector<NamedRanking> parse_predictions(std::istream& in, const std::string& source) {
  std::vector<NamedRanking> result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected exactly one tab separating user and ranking");
    }
    NamedRanking entry{line.substr(0, tab), {}};
    if (entry.first.empty()) throw ParseError(source, line_no, "empty user id");
    if (!seen.insert(entry.first).second) {
      throw ParseError(source, line_no, "duplicate user id '" + entry.first + "'");
    }
    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    if (rest.empty()) throw ParseError(source, line_no, "empty ranking");
    while (true) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto colon = item.rfind(':');
      if (colon == std::string_view::npos || colon == 0) {
        throw ParseError(source, line_no, "expected concept:score, got '" + std::string(item) + "'");
      }
      const auto value = parse_number(item.substr(colon + 1));
      if (!value) {
        throw ParseError(source, line_no, "invalid score in '" + std::string(item) + "'");
      }
      entry.second.emplace_back(std::string(item.substr(0, colon)), *value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    result.push_back(std::move(entry));
  }
  return result;
}

std::vector<NamedSet> parse_truth(std::istream& in, const std::string& source) {
  std::vector<NamedSet> result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto record = parse_record(line, source, line_no, true);
    if (!seen.insert(record.first).second) {
      throw ParseError(source, line_no, "duplicate user id '" + record.first + "'");
    }
    result.push_back(std::move(record));
  }
  return result;
}

void write_truth(std::ostream& out, const Corpus& corpus, const GroundTruth& truth) {
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    json concepts = json::array();
    for (int id : truth.relevant[u]) concepts.push_back(corpus.vocab.name(id));
    out << json{{"user", corpus.users[u]},
                {"concepts", std::move(concepts)},
                {"topic", truth.y[u]},
                {"z", truth.z[u]}}
               .dump()
        << '\n';
  }
}

void write_trace(std::ostream& out, std::span<const TracePoint> trace) {
  out << "iteration,seconds,log_likelihood\n";
  for (const auto& p : trace) {
    out << p.iteration << ',' << format_double(p.seconds) << ',' << format_double(p.log_likelihood)
        << '\n';
  }
}

}  // namespace genvector::io
