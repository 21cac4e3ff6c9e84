#include "oc4seq/cli.hpp"

#include <fmt/format.h>

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "oc4seq/baselines.hpp"
#include "oc4seq/checkpoint.hpp"
#include "oc4seq/errors.hpp"
#include "oc4seq/eval.hpp"
#include "oc4seq/io.hpp"
#include "oc4seq/serialize.hpp"

namespace oc4seq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Detector d) {
  switch (d) {
    case Detector::kGlobalOnly: return "oc4seq-global-only";
    case Detector::kPca: return "pca";
    default: return "oc4seq";
  }
}

Detector parse_detector(const std::string& s) {
  if (s == "oc4seq") return Detector::kOC4Seq;
  if (s == "oc4seq-global-only") return Detector::kGlobalOnly;
  if (s == "pca") return Detector::kPca;
  throw ConfigError("detector must be one of oc4seq, oc4seq-global-only, pca; got '" + s + "'");
}

fs::path RunConfig::out(const std::string& name) const { return fs::path(output_dir) / name; }

fs::path RunConfig::model_path() const {
  if (!checkpoint.empty()) return checkpoint;
  return out(detector == Detector::kPca ? "pca-model.json" : "checkpoint.json");
}

json default_config_json() {
  const RunConfig d;
  return json{
      {"seed", d.seed},
      {"detector", to_string(d.detector)},
      {"aggregation", to_string(d.train.aggregation)},
      {"output_dir", d.output_dir},
      {"checkpoint", d.checkpoint},
      {"data",
       {{"train", ""}, {"val_normal", ""}, {"val_abnormal", ""}, {"test_normal", ""}, {"test_abnormal", ""}}},
      {"train",
       {{"lr", d.train.lr},
        {"batch", d.train.batch},
        {"epochs", d.train.epochs},
        {"hidden", d.train.hidden},
        {"layers", d.train.layers},
        {"embed_dim", d.train.embed_dim},
        {"window", d.train.window},
        {"alpha", d.train.alpha},
        {"lambda", d.train.lambda}}},
      {"gen",
       {{"num_events", d.gen.chain.num_events},
        {"out_degree", d.gen.chain.out_degree},
        {"min_len", d.gen.chain.min_len},
        {"max_len", d.gen.chain.max_len},
        {"n_train", d.gen.n_train},
        {"n_normal_holdout", d.gen.n_normal_holdout},
        {"n_abnormal", d.gen.n_abnormal},
        {"anomaly", "local"},
        {"span", d.gen.span},
        {"spans", d.gen.spans}}},
      {"sweep", {{"alphas", d.sweep.alphas}, {"layers", d.sweep.layers}}},
      {"score", {{"inputs", json::array()}}},
  };
}

namespace {

// Overlays `src` on `dst`, rejecting keys that the schema does not define.
void merge_checked(json& dst, const json& src, const std::string& where) {
  if (!src.is_object()) throw ConfigError("config" + where + " must be a JSON object");
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!dst.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    json& slot = dst[it.key()];
    if (slot.is_object()) {
      merge_checked(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  const json& seed = j.at("seed");
  if (!seed.is_number_integer() || seed.get<long long>() < 0) {
    throw ConfigError("config key 'seed' must be a non-negative integer");
  }
  c.seed = seed.get<std::uint64_t>();
  c.detector = parse_detector(get_as<std::string>(j, "detector"));
  c.output_dir = get_as<std::string>(j, "output_dir");
  c.checkpoint = get_as<std::string>(j, "checkpoint");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");

  const json& d = j.at("data");
  c.data.train = get_as<std::string>(d, "train");
  c.data.val_normal = get_as<std::string>(d, "val_normal");
  c.data.val_abnormal = get_as<std::string>(d, "val_abnormal");
  c.data.test_normal = get_as<std::string>(d, "test_normal");
  c.data.test_abnormal = get_as<std::string>(d, "test_abnormal");

  const json& t = j.at("train");
  c.train.lr = get_as<double>(t, "lr");
  c.train.batch = get_count(t, "batch");
  c.train.epochs = get_count(t, "epochs");
  c.train.hidden = get_count(t, "hidden");
  c.train.layers = get_count(t, "layers");
  c.train.embed_dim = get_count(t, "embed_dim");
  c.train.window = get_count(t, "window");
  c.train.alpha = get_as<double>(t, "alpha");
  c.train.lambda = get_as<double>(t, "lambda");
  c.train.aggregation = parse_aggregation(get_as<std::string>(j, "aggregation"));
  c.train.seed = c.seed;
  if (c.detector == Detector::kGlobalOnly) c.train.alpha = 0.0;
  c.train.validate();

  const json& g = j.at("gen");
  c.gen.chain.num_events = get_count(g, "num_events");
  c.gen.chain.out_degree = get_count(g, "out_degree");
  c.gen.chain.min_len = get_count(g, "min_len");
  c.gen.chain.max_len = get_count(g, "max_len");
  c.gen.chain.seed = c.seed;
  c.gen.n_train = get_count(g, "n_train");
  c.gen.n_normal_holdout = get_count(g, "n_normal_holdout");
  c.gen.n_abnormal = get_count(g, "n_abnormal");
  const auto kind = get_as<std::string>(g, "anomaly");
  if (kind == "local") {
    c.gen.anomaly = AnomalyKind::kLocal;
  } else if (kind == "permutation") {
    c.gen.anomaly = AnomalyKind::kPermutation;
  } else {
    throw ConfigError("gen.anomaly must be 'local' or 'permutation'");
  }
  c.gen.span = get_count(g, "span");
  c.gen.spans = get_count(g, "spans");

  const json& s = j.at("sweep");
  c.sweep.alphas = get_as<std::vector<double>>(s, "alphas");
  c.sweep.layers = get_as<std::vector<std::size_t>>(s, "layers");
  c.score_inputs = get_as<std::vector<std::string>>(j.at("score"), "inputs");
  return c;
}

RunConfig load_config(const std::optional<fs::path>& file,
                      const std::vector<std::string>& overrides) {
  json merged = default_config_json();
  if (file) {
    if (!fs::is_regular_file(*file)) throw ConfigError("config file not found: " + file->string());
    json doc;
    try {
      doc = json::parse(io::read_file(*file));
    } catch (const json::exception& e) {
      throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    merge_checked(merged, doc, "");
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + ov + "'");
    const std::string key = ov.substr(0, eq);
    json patch = parse_override_value(ov.substr(eq + 1));
    // Build {"a":{"b":value}} from "a.b".
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
    merge_checked(merged, patch, "");
  }
  return config_from_json(merged);
}

namespace {

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("config: ") + what + " path is not set");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

void ensure_output_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("cannot create output directory '" + cfg.output_dir + "'");
  }
  const fs::path probe = cfg.out(".oc4seq-write-probe");
  try {
    io::write_atomic(probe, "");
  } catch (const DataError&) {
    throw ConfigError("output directory is not writable: " + cfg.output_dir);
  }
  fs::remove(probe, ec);
}

void require_eval_data(const RunConfig& cfg) {
  require_file(cfg.data.val_normal, "data.val_normal");
  require_file(cfg.data.val_abnormal, "data.val_abnormal");
  require_file(cfg.data.test_normal, "data.test_normal");
  require_file(cfg.data.test_abnormal, "data.test_abnormal");
}

std::vector<EventSequence> load_labeled(const std::string& normal, const std::string& abnormal) {
  auto seqs = load_sequences(normal, Label::kNormal);
  auto ab = load_sequences(abnormal, Label::kAbnormal);
  seqs.insert(seqs.end(), std::make_move_iterator(ab.begin()), std::make_move_iterator(ab.end()));
  return seqs;
}

struct ScoreRow {
  std::string id;
  double global = 0.0;
  double local_max = 0.0;
  double combined = 0.0;
};

// Either an OC4Seq model or the PCA baseline.
class Scorer {
 public:
  explicit Scorer(const RunConfig& cfg) : detector_(cfg.detector) {
    const fs::path path = cfg.model_path();
    if (!fs::is_regular_file(path)) throw ConfigError("model file not found: " + path.string());
    if (detector_ == Detector::kPca) {
      pca_ = pca_model_from_json(io::read_file(path));
    } else {
      model_.emplace(load_checkpoint(path).model);
      model_->set_aggregation(cfg.train.aggregation);
      if (detector_ == Detector::kGlobalOnly) model_->set_alpha(0.0);
    }
  }

  ScoreRow operator()(const EventSequence& seq) const {
    if (pca_) {
      const double s = pca_score(*pca_, seq);
      return {seq.id, s, 0.0, s};
    }
    const ScoreReport r = score(*model_, seq);
    return {seq.id, r.global_score, r.local_max(), r.combined};
  }

  const OC4SeqModel& model() const {
    if (!model_) throw ConfigError("this command needs an oc4seq model, not the PCA baseline");
    return *model_;
  }

 private:
  Detector detector_;
  std::optional<OC4SeqModel> model_;
  std::optional<PCAModel> pca_;
};

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "id,global,local_max,combined\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.id, serialize::format_double(r.global),
                       serialize::format_double(r.local_max), serialize::format_double(r.combined));
  }
  return out;
}

std::vector<ScoreRow> read_scores_csv(const fs::path& path) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,global,local_max,combined", 0) != 0) {
    throw DataError(path.string() + ": missing scores header");
  }
  std::vector<ScoreRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 4) throw DataError(fmt::format("{}:{}: expected 4 columns", path.string(), line_no));
    try {
      rows.push_back({cols[0], std::stod(cols[1]), std::stod(cols[2]), std::stod(cols[3])});
    } catch (const std::exception&) {
      throw DataError(fmt::format("{}:{}: malformed number", path.string(), line_no));
    }
  }
  return rows;
}

std::vector<ScoreRow> score_all(const Scorer& scorer, const std::vector<EventSequence>& seqs) {
  std::vector<ScoreRow> rows;
  rows.reserve(seqs.size());
  for (const auto& s : seqs) rows.push_back(scorer(s));
  return rows;
}

double validation_ap(const OC4SeqModel& model, const std::vector<EventSequence>& val) {
  std::vector<double> scores;
  std::vector<Label> labels;
  for (const auto& s : val) {
    scores.push_back(score(model, s).combined);
    labels.push_back(s.label);
  }
  return pr_curve(scores, labels).average_precision;
}

void log(const std::string& msg) { std::cerr << msg << '\n'; }

}  // namespace

void cmd_gen(const RunConfig& cfg) {
  const GenConfig& g = cfg.gen;
  g.chain.validate();
  if (g.n_train == 0 || g.n_normal_holdout == 0) {
    throw ConfigError("gen.n_train and gen.n_normal_holdout must be positive");
  }
  if (g.span == 0 || g.spans == 0) throw ConfigError("gen.span and gen.spans must be positive");
  if (g.anomaly == AnomalyKind::kPermutation && g.chain.min_len < 2) {
    throw ConfigError("permutation anomalies need min_len >= 2");
  }
  if (g.anomaly == AnomalyKind::kLocal && g.chain.out_degree == g.chain.num_events) {
    throw ConfigError("local anomalies need out_degree < num_events");
  }
  ensure_output_dir(cfg);

  const std::uint64_t normal_seed = cfg.seed + 1;
  const std::uint64_t source_seed = cfg.seed + 2;
  const std::uint64_t split_seed = cfg.seed + 3;
  const std::uint64_t inject_seed = cfg.seed * 1000003ULL + 17;

  const MarkovChain chain = MarkovChain::random(g.chain);
  const auto normals = gen_normal(chain, g.chain.min_len, g.chain.max_len,
                                  g.n_train + g.n_normal_holdout, normal_seed);
  std::vector<EventSequence> abnormals;
  if (g.n_abnormal > 0) {
    const auto sources = gen_normal(chain, g.chain.min_len, g.chain.max_len, g.n_abnormal, source_seed);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      abnormals.push_back(g.anomaly == AnomalyKind::kLocal
                              ? inject_local_anomaly(chain, sources[i], g.span, inject_seed + i, g.spans)
                              : inject_global_permutation(sources[i], inject_seed + i));
    }
  }
  const DatasetSplit split = split_dataset(normals, abnormals, g.n_train, split_seed);

  auto by_label = [](const std::vector<EventSequence>& seqs, Label label) {
    std::vector<EventSequence> out;
    for (const auto& s : seqs) {
      if (s.label == label) out.push_back(s);
    }
    return out;
  };
  const auto val_n = by_label(split.val, Label::kNormal);
  const auto val_a = by_label(split.val, Label::kAbnormal);
  const auto test_n = by_label(split.test, Label::kNormal);
  const auto test_a = by_label(split.test, Label::kAbnormal);
  save_sequences(cfg.out("train.txt"), split.train);
  save_sequences(cfg.out("val_normal.txt"), val_n);
  save_sequences(cfg.out("val_abnormal.txt"), val_a);
  save_sequences(cfg.out("test_normal.txt"), test_n);
  save_sequences(cfg.out("test_abnormal.txt"), test_a);

  json manifest{
      {"format", "oc4seq-gen"},
      {"version", 1},
      {"chain",
       {{"num_events", g.chain.num_events},
        {"out_degree", g.chain.out_degree},
        {"seed", g.chain.seed},
        {"min_len", g.chain.min_len},
        {"max_len", g.chain.max_len}}},
      {"seeds",
       {{"base", cfg.seed}, {"normal", normal_seed}, {"abnormal_source", source_seed},
        {"split", split_seed}, {"inject", inject_seed}}},
      {"anomaly",
       {{"kind", g.anomaly == AnomalyKind::kLocal ? "local" : "permutation"},
        {"span", g.span},
        {"spans", g.spans}}},
      {"counts",
       {{"train", split.train.size()}, {"val_normal", val_n.size()}, {"val_abnormal", val_a.size()},
        {"test_normal", test_n.size()}, {"test_abnormal", test_a.size()}}},
      {"transitions", chain.transitions()},
  };
  io::write_atomic(cfg.out("manifest.json"), manifest.dump(2) + "\n");
  log(fmt::format("wrote {} train, {}+{} val, {}+{} test sequences to {}", split.train.size(),
                  val_n.size(), val_a.size(), test_n.size(), test_a.size(), cfg.output_dir));
}

void cmd_train(const RunConfig& cfg) {
  require_file(cfg.data.train, "data.train");
  ensure_output_dir(cfg);
  const auto train_set = load_sequences(cfg.data.train, Label::kNormal);

  if (cfg.detector == Detector::kPca) {
    const EventVocab vocab = build_vocab(train_set);
    const PCAModel model = fit_pca(count_matrix(train_set, vocab.size()));
    io::write_atomic(cfg.model_path(), pca_model_json(model));
    log(fmt::format("PCA: {} components retain {:.4f} of the variance", model.components(),
                    model.retained_variance));
    return;
  }

  const TrainResult result = train(train_set, cfg.train, [](std::size_t epoch, double loss) {
    log(fmt::format("epoch {:4d}  loss {:.10g}", epoch, loss));
  });
  std::string history = "epoch,loss\n";
  for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
    history += fmt::format("{},{}\n", i + 1, serialize::format_double(result.loss_history[i]));
  }
  save_checkpoint(cfg.model_path(), result.model, cfg.train);
  io::write_atomic(cfg.out("loss_history.csv"), history);
}

void cmd_score(const RunConfig& cfg) {
  if (cfg.score_inputs.empty()) {
    require_eval_data(cfg);
  } else {
    for (const auto& p : cfg.score_inputs) require_file(p, "score input");
  }
  ensure_output_dir(cfg);
  const Scorer scorer(cfg);
  if (!cfg.score_inputs.empty()) {
    std::vector<ScoreRow> rows;
    for (const auto& p : cfg.score_inputs) {
      auto part = score_all(scorer, load_sequences(p, Label::kNormal));
      rows.insert(rows.end(), part.begin(), part.end());
    }
    io::write_atomic(cfg.out("scores.csv"), scores_csv(rows));
    return;
  }
  io::write_atomic(cfg.out("scores_val.csv"),
                   scores_csv(score_all(scorer, load_labeled(cfg.data.val_normal, cfg.data.val_abnormal))));
  io::write_atomic(cfg.out("scores_test.csv"),
                   scores_csv(score_all(scorer, load_labeled(cfg.data.test_normal, cfg.data.test_abnormal))));
}

void cmd_eval(const RunConfig& cfg) {
  require_eval_data(cfg);
  require_file(cfg.out("scores_val.csv").string(), "validation scores (run `score` first)");
  require_file(cfg.out("scores_test.csv").string(), "test scores (run `score` first)");

  std::map<std::string, Label> labels;
  for (const auto& s : load_labeled(cfg.data.val_normal, cfg.data.val_abnormal)) labels[s.id] = s.label;
  for (const auto& s : load_labeled(cfg.data.test_normal, cfg.data.test_abnormal)) labels[s.id] = s.label;

  auto split_columns = [&](const std::vector<ScoreRow>& rows, std::vector<double>& scores,
                           std::vector<Label>& truth) {
    for (const auto& r : rows) {
      auto it = labels.find(r.id);
      if (it == labels.end()) throw DataError("score row '" + r.id + "' matches no labeled sequence");
      scores.push_back(r.combined);
      truth.push_back(it->second);
    }
  };
  std::vector<double> val_scores, test_scores;
  std::vector<Label> val_truth, test_truth;
  split_columns(read_scores_csv(cfg.out("scores_val.csv")), val_scores, val_truth);
  split_columns(read_scores_csv(cfg.out("scores_test.csv")), test_scores, test_truth);

  const double tau = choose_threshold(val_scores, val_truth);
  const EvalReport report = evaluate_at_threshold(test_scores, test_truth, tau);
  const PRCurve test_curve = pr_curve(test_scores, test_truth);
  const PRCurve val_curve = pr_curve(val_scores, val_truth);

  json doc = json::parse(eval_report_json(report, test_curve.average_precision));
  doc["val_average_precision"] = val_curve.average_precision;
  doc["detector"] = to_string(cfg.detector);
  io::write_atomic(cfg.out("report.json"), doc.dump(2) + "\n");
  io::write_atomic(cfg.out("pr_curve.csv"), pr_curve_csv(test_curve));
  log(fmt::format("test: precision {:.4f} recall {:.4f} F1 {:.4f} AP {:.4f}", report.precision,
                  report.recall, report.f1, test_curve.average_precision));
}

void cmd_sweep(const RunConfig& cfg) {
  if (cfg.sweep.alphas.empty() || cfg.sweep.layers.empty()) throw ConfigError("sweep grid is empty");
  if (cfg.detector == Detector::kPca) throw ConfigError("sweep applies to the oc4seq detector");
  for (double a : cfg.sweep.alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("sweep alphas must be finite and >= 0");
  }
  for (std::size_t l : cfg.sweep.layers) {
    if (l == 0) throw ConfigError("sweep layers must be positive");
  }
  require_file(cfg.data.train, "data.train");
  require_file(cfg.data.val_normal, "data.val_normal");
  require_file(cfg.data.val_abnormal, "data.val_abnormal");
  ensure_output_dir(cfg);

  const auto train_set = load_sequences(cfg.data.train, Label::kNormal);
  const auto val = load_labeled(cfg.data.val_normal, cfg.data.val_abnormal);
  std::string table = "alpha,layers,val_ap\n";
  for (std::size_t layers : cfg.sweep.layers) {
    for (double alpha : cfg.sweep.alphas) {
      TrainConfig t = cfg.train;
      t.alpha = cfg.detector == Detector::kGlobalOnly ? 0.0 : alpha;
      t.layers = layers;
      const TrainResult result = train(train_set, t);
      const double ap = validation_ap(result.model, val);
      log(fmt::format("alpha {:g} layers {}: validation AP {:.4f}", alpha, layers, ap));
      table += fmt::format("{},{},{}\n", serialize::format_double(alpha), layers,
                           serialize::format_double(ap));
    }
  }
  io::write_atomic(cfg.out("sweep.csv"), table);
}

void cmd_project(const RunConfig& cfg) {
  if (cfg.detector == Detector::kPca) throw ConfigError("project needs an oc4seq model");
  require_eval_data(cfg);
  ensure_output_dir(cfg);
  const Scorer scorer(cfg);
  const OC4SeqModel& model = scorer.model();

  auto seqs = load_labeled(cfg.data.val_normal, cfg.data.val_abnormal);
  auto test = load_labeled(cfg.data.test_normal, cfg.data.test_abnormal);
  seqs.insert(seqs.end(), test.begin(), test.end());

  std::vector<nn::Vector> reps;
  std::vector<Label> labels;
  std::string raw = "id,label";
  for (std::size_t i = 0; i < model.config().hidden; ++i) raw += fmt::format(",h{}", i);
  raw += '\n';
  for (const auto& s : seqs) {
    reps.push_back(represent(model, s).global);
    labels.push_back(s.label);
    raw += s.id + "," + to_string(s.label);
    for (Eigen::Index i = 0; i < reps.back().size(); ++i) raw += "," + serialize::format_double(reps.back()[i]);
    raw += '\n';
  }
  io::write_atomic(cfg.out("projection.csv"), projection_csv(project_2d(reps, labels)));
  io::write_atomic(cfg.out("representations.csv"), raw);
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_command(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "gen") cmd_gen(cfg);
    else if (command == "train") cmd_train(cfg);
    else if (command == "score") cmd_score(cfg);
    else if (command == "eval") cmd_eval(cfg);
    else if (command == "sweep") cmd_sweep(cfg);
    else if (command == "project") cmd_project(cfg);
    else throw ConfigError("unknown command '" + command + "'");
    return 0;
  } catch (...) {
    return exit_code_for_current_exception();
  }
}

}  // namespace oc4seq::cli
