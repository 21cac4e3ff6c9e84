#include "oc4seq/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "oc4seq/errors.hpp"

namespace oc4seq {

using nn::Matrix;
using nn::Vector;

const char* to_string(Aggregation agg) {
  return agg == Aggregation::kMean ? "mean" : "max";
}

Aggregation parse_aggregation(const std::string& s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "mean") return Aggregation::kMean;
  throw ConfigError("aggregation must be 'max' or 'mean', got '" + s + "'");
}

void ModelConfig::validate() const {
  if (vocab_size < 2) throw ConfigError("vocab_size must be at least 2");
  if (embed_dim == 0 || hidden == 0 || layers == 0 || window == 0) {
    throw ConfigError("embed_dim, hidden, layers and window must be positive");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be positive");
  if (batch == 0) throw ConfigError("batch must be positive");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  model_config(2).validate();
}

ModelConfig TrainConfig::model_config(std::size_t vocab_size) const {
  ModelConfig m;
  m.vocab_size = vocab_size;
  m.embed_dim = embed_dim;
  m.hidden = hidden;
  m.layers = layers;
  m.window = window;
  m.alpha = alpha;
  m.lambda = lambda;
  m.aggregation = aggregation;
  return m;
}

OC4SeqModel::OC4SeqModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  embedding_ = nn::add_embedding(params_, "embedding", config_.embed_dim, config_.vocab_size);
  global_ = nn::add_gru(params_, "global", config_.embed_dim, config_.hidden, config_.layers);
  local_ = nn::add_gru(params_, "local", config_.embed_dim, config_.hidden, config_.layers);
}

void OC4SeqModel::initialize(std::uint64_t seed) { nn::init_params(params_, seed); }

void OC4SeqModel::set_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be finite and >= 0");
  config_.alpha = alpha;
}

void OC4SeqModel::set_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  config_.lambda = lambda;
}

bool OC4SeqModel::is_local_param(std::size_t index) const {
  return params_[index].name.rfind("local.", 0) == 0;
}

Vector clamp_center(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) < kMinCenterMagnitude) {
      v[i] = v[i] < 0.0 ? -kMinCenterMagnitude : kMinCenterMagnitude;
    }
  }
  return v;
}

void OC4SeqModel::set_centers(Vector center, Vector local_center) {
  const auto h = static_cast<Eigen::Index>(config_.hidden);
  if (center.size() != h || local_center.size() != h) {
    throw ConfigError("center dimension does not match the hidden size");
  }
  center_ = clamp_center(std::move(center));
  local_center_ = clamp_center(std::move(local_center));
}

namespace {

// Embedded inputs for the global head: one d_e x 1 matrix per step.
std::vector<Matrix> global_inputs(const OC4SeqModel& model, const EventSequence& seq,
                                  std::vector<EventId>& ids) {
  const Matrix& emb = model.params()[model.embedding().param].value;
  ids.resize(seq.events.size());
  std::vector<Matrix> xs(seq.events.size());
  for (std::size_t t = 0; t < seq.events.size(); ++t) {
    ids[t] = model.map_event(seq.events[t]);
    xs[t] = emb.col(ids[t]);
  }
  return xs;
}

// Embedded inputs for the local head: step t holds column j = window j's
// t-th event. `ids` is laid out [t * windows + j].
std::vector<Matrix> local_inputs(const OC4SeqModel& model, const EventSequence& seq,
                                 std::vector<EventId>& ids, Eigen::Index& n_windows) {
  const Matrix& emb = model.params()[model.embedding().param].value;
  const std::size_t n = seq.events.size();
  const std::size_t m = model.config().window;
  const std::size_t steps = std::min(n, m);
  const std::size_t count = window_count(n, m);
  n_windows = static_cast<Eigen::Index>(count);
  ids.resize(steps * count);
  std::vector<Matrix> xs(steps, Matrix(emb.rows(), n_windows));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t j = 0; j < count; ++j) {
      const EventId id = model.map_event(seq.events[j + t]);
      ids[t * count + j] = id;
      xs[t].col(static_cast<Eigen::Index>(j)) = emb.col(id);
    }
  }
  return xs;
}

void require_ready(const OC4SeqModel& model) {
  if (!model.has_centers()) throw ConfigError("model centers are not initialised");
}

void require_nonempty(const EventSequence& seq) {
  if (seq.events.empty()) throw DataError(seq.id + ": empty sequence");
}

}  // namespace

Representation represent(const OC4SeqModel& model, const EventSequence& seq) {
  require_nonempty(seq);
  std::vector<EventId> ids;
  Representation rep;
  auto g = nn::gru_sequence_forward(model.params(), model.global_gru(),
                                    global_inputs(model, seq, ids));
  rep.global = g.final_h.col(0);
  Eigen::Index n_windows = 0;
  auto l = nn::gru_sequence_forward(model.params(), model.local_gru(),
                                    local_inputs(model, seq, ids, n_windows));
  rep.local = std::move(l.final_h);
  return rep;
}

std::pair<Vector, Vector> compute_centers(std::span<const Vector> global,
                                          std::span<const Matrix> local) {
  if (global.empty() || local.empty()) throw DataError("center initialisation needs training sequences");
  Vector c = Vector::Zero(global.front().size());
  for (const auto& g : global) c += g;
  c /= static_cast<double>(global.size());

  Vector c_local = Vector::Zero(local.front().rows());
  Eigen::Index count = 0;
  for (const auto& l : local) {
    c_local += l.rowwise().sum();
    count += l.cols();
  }
  c_local /= static_cast<double>(count);
  return {clamp_center(std::move(c)), clamp_center(std::move(c_local))};
}

void init_centers(OC4SeqModel& model, std::span<const EventSequence> train) {
  if (train.empty()) throw DataError("center initialisation needs training sequences");
  std::vector<Vector> global;
  std::vector<Matrix> local;
  global.reserve(train.size());
  local.reserve(train.size());
  for (const auto& seq : train) {
    auto rep = represent(model, seq);
    global.push_back(std::move(rep.global));
    local.push_back(std::move(rep.local));
  }
  auto [c, c_local] = compute_centers(global, local);
  model.set_centers(std::move(c), std::move(c_local));
}

double global_param_norm(const OC4SeqModel& model) {
  double s = 0.0;
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    if (!model.is_local_param(i)) s += model.params()[i].value.squaredNorm();
  }
  return s;
}

double local_param_norm(const OC4SeqModel& model) {
  double s = 0.0;
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    if (model.is_local_param(i)) s += model.params()[i].value.squaredNorm();
  }
  return s;
}

double loss_global(const OC4SeqModel& model, std::span<const EventSequence> batch) {
  require_ready(model);
  if (batch.empty()) throw DataError("empty batch");
  double sum = 0.0;
  std::vector<EventId> ids;
  for (const auto& seq : batch) {
    require_nonempty(seq);
    auto g = nn::gru_sequence_forward(model.params(), model.global_gru(),
                                      global_inputs(model, seq, ids));
    sum += (g.final_h.col(0) - model.center()).squaredNorm();
  }
  return sum / static_cast<double>(batch.size()) +
         model.config().lambda * global_param_norm(model);
}

double loss_local(const OC4SeqModel& model, std::span<const EventSequence> batch) {
  require_ready(model);
  if (batch.empty()) throw DataError("empty batch");
  double sum = 0.0;
  std::vector<EventId> ids;
  Eigen::Index n_windows = 0;
  for (const auto& seq : batch) {
    require_nonempty(seq);
    auto l = nn::gru_sequence_forward(model.params(), model.local_gru(),
                                      local_inputs(model, seq, ids, n_windows));
    sum += (l.final_h.colwise() - model.local_center()).squaredNorm();
  }
  return sum / static_cast<double>(batch.size()) +
         model.config().lambda * local_param_norm(model);
}

double loss_total(const OC4SeqModel& model, std::span<const EventSequence> batch) {
  const double alpha = model.config().alpha;
  double loss = loss_global(model, batch);
  if (alpha != 0.0) loss += alpha * loss_local(model, batch);
  return loss;
}

double accumulate_gradients(OC4SeqModel& model, std::span<const EventSequence> batch,
                            double scale) {
  require_ready(model);
  if (batch.empty()) throw DataError("empty batch");
  const double alpha = model.config().alpha;
  const double lambda = model.config().lambda;
  const double k = scale / static_cast<double>(batch.size());
  auto& store = model.params();
  const nn::Embedding emb = model.embedding();

  double loss = 0.0;
  std::vector<EventId> ids;
  for (const auto& seq : batch) {
    require_nonempty(seq);
    {
      auto xs = global_inputs(model, seq, ids);
      auto g = nn::gru_sequence_forward(store, model.global_gru(), xs);
      const Matrix diff = g.final_h.colwise() - model.center();
      loss += k * diff.squaredNorm();
      auto dxs = nn::gru_sequence_backward_final(store, model.global_gru(), g.cache,
                                                 (2.0 * k) * diff);
      for (std::size_t t = 0; t < dxs.size(); ++t) nn::embed_backward(store, emb, ids[t], dxs[t].col(0));
    }
    if (alpha != 0.0) {
      Eigen::Index n_windows = 0;
      auto xs = local_inputs(model, seq, ids, n_windows);
      auto l = nn::gru_sequence_forward(store, model.local_gru(), xs);
      const Matrix diff = l.final_h.colwise() - model.local_center();
      loss += k * alpha * diff.squaredNorm();
      auto dxs = nn::gru_sequence_backward_final(store, model.local_gru(), l.cache,
                                                 (2.0 * k * alpha) * diff);
      for (std::size_t t = 0; t < dxs.size(); ++t) {
        for (Eigen::Index j = 0; j < n_windows; ++j) {
          nn::embed_backward(store, emb, ids[t * static_cast<std::size_t>(n_windows) + static_cast<std::size_t>(j)],
                             dxs[t].col(j));
        }
      }
    }
  }

  if (lambda != 0.0) {
    for (std::size_t i = 0; i < store.size(); ++i) {
      const double w = model.is_local_param(i) ? alpha : 1.0;
      if (w == 0.0) continue;
      auto& p = store[i];
      loss += scale * w * lambda * p.value.squaredNorm();
      p.grad += (2.0 * scale * w * lambda) * p.value;
    }
  }
  return loss;
}

double grad_check(OC4SeqModel& model, std::span<const EventSequence> batch, double delta) {
  return nn::grad_check(
      model.params(), [&] { return loss_total(model, batch); },
      [&] { accumulate_gradients(model, batch); }, delta);
}

TrainResult train(std::span<const EventSequence> data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.empty()) throw DataError("training set is empty");
  for (const auto& seq : data) {
    if (seq.abnormal()) throw DataError(seq.id + ": training set must contain only normal sequences");
  }
  const EventVocab vocab = build_vocab(data);
  TrainResult result{OC4SeqModel(cfg.model_config(vocab.size())), {}};
  OC4SeqModel& model = result.model;
  model.initialize(cfg.seed);
  init_centers(model, data);

  nn::AdamState adam = nn::make_adam(model.params());
  std::mt19937_64 rng(cfg.seed + 0x5851f42d4c957f2dULL);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EventSequence> batch;
  batch.reserve(cfg.batch);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const double loss = accumulate_gradients(model, batch);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch + 1));
      }
      weighted += loss * static_cast<double>(batch.size());
      nn::adam_step(model.params(), adam, cfg.lr);
    }
    if (!model.params().all_finite()) {
      throw NumericError("non-finite parameters after epoch " + std::to_string(epoch + 1));
    }
    const double mean = weighted / static_cast<double>(data.size());
    result.loss_history.push_back(mean);
    if (on_epoch) on_epoch(epoch + 1, mean);
  }
  return result;
}

TrainResult train(const DatasetSplit& dataset, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  return train(std::span<const EventSequence>(dataset.train), cfg, on_epoch);
}

double ScoreReport::local_max() const {
  return local_scores.empty() ? 0.0 : *std::max_element(local_scores.begin(), local_scores.end());
}

double ScoreReport::local_mean() const {
  if (local_scores.empty()) return 0.0;
  return std::accumulate(local_scores.begin(), local_scores.end(), 0.0) /
         static_cast<double>(local_scores.size());
}

double combine_scores(double global, std::span<const double> local, double alpha,
                      Aggregation agg) {
  if (alpha == 0.0 || local.empty()) return global;
  double pooled = 0.0;
  if (agg == Aggregation::kMax) {
    pooled = *std::max_element(local.begin(), local.end());
  } else {
    pooled = std::accumulate(local.begin(), local.end(), 0.0) / static_cast<double>(local.size());
  }
  return global + alpha * pooled;
}

ScoreReport score(const OC4SeqModel& model, const EventSequence& seq) {
  require_ready(model);
  const Representation rep = represent(model, seq);
  ScoreReport report;
  report.id = seq.id;
  report.global_score = (rep.global - model.center()).squaredNorm();
  const Vector local = (rep.local.colwise() - model.local_center()).colwise().squaredNorm().transpose();
  report.local_scores.assign(local.data(), local.data() + local.size());
  report.combined = combine_scores(report.global_score, report.local_scores,
                                   model.config().alpha, model.config().aggregation);
  return report;
}

double choose_threshold(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
  std::vector<std::pair<double, bool>> items;
  items.reserve(scores.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw DataError("non-finite score");
    const bool pos = labels[i] == Label::kAbnormal;
    positives += pos;
    items.emplace_back(scores[i], pos);
  }
  const std::size_t negatives = items.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("threshold selection needs both normal and abnormal sequences");
  }
  std::sort(items.begin(), items.end());

  auto f1 = [&](std::size_t tp, std::size_t fp) {
    const std::size_t fn = positives - tp;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  };
  // tau = -inf: everything is predicted abnormal.
  std::size_t tp = positives;
  std::size_t fp = negatives;
  double best_tau = -std::numeric_limits<double>::infinity();
  double best_f1 = f1(tp, fp);
  for (std::size_t i = 0; i < items.size();) {
    const double s = items[i].first;
    std::size_t j = i;
    for (; j < items.size() && items[j].first == s; ++j) {
      (items[j].second ? tp : fp) -= 1;
    }
    double tau = std::numeric_limits<double>::infinity();
    if (j < items.size()) {
      const double next = items[j].first;
      tau = s + (next - s) / 2.0;
      if (!(tau < next)) tau = s;
    }
    const double f = f1(tp, fp);
    if (f > best_f1) {
      best_f1 = f;
      best_tau = tau;
    }
    i = j;
  }
  return best_tau;
}

}  // namespace oc4seq
