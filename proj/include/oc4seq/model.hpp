#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oc4seq/nn.hpp"
#include "oc4seq/sequences.hpp"

namespace oc4seq {

/// How per-window local scores are folded into the combined score.
enum class Aggregation { kMax, kMean };

const char* to_string(Aggregation agg);
Aggregation parse_aggregation(const std::string& s);

/// Architecture and objective hyperparameters fixed at model construction.
struct ModelConfig {
  std::size_t vocab_size = 2;
  std::size_t embed_dim = 32;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::size_t window = 10;
  /// Weight of the local (windowed) objective; 0 gives the global-only model.
  double alpha = 1.0;
  double lambda = 1e-4;
  Aggregation aggregation = Aggregation::kMax;

  void validate() const;
};

struct TrainConfig {
  double lr = 0.01;
  std::size_t batch = 64;
  std::size_t epochs = 100;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::size_t embed_dim = 32;
  std::size_t window = 10;
  double alpha = 1.0;
  double lambda = 1e-4;
  Aggregation aggregation = Aggregation::kMax;
  std::uint64_t seed = 0;

  void validate() const;
  ModelConfig model_config(std::size_t vocab_size) const;
};

/// Embedding shared by a global GRU over the whole sequence and a local GRU
/// over sliding windows, each paired with a fixed hypersphere center.
class OC4SeqModel {
 public:
  /// Parameters are allocated and zero; call initialize() or load them.
  explicit OC4SeqModel(const ModelConfig& config);

  /// Fills every parameter from the seeded uniform fan-in rule.
  void initialize(std::uint64_t seed);

  const ModelConfig& config() const noexcept { return config_; }
  /// Objective weights may be changed after construction; shapes may not.
  void set_alpha(double alpha);
  void set_lambda(double lambda);
  void set_aggregation(Aggregation agg) { config_.aggregation = agg; }

  nn::ParamStore& params() noexcept { return params_; }
  const nn::ParamStore& params() const noexcept { return params_; }
  nn::Embedding embedding() const noexcept { return embedding_; }
  const nn::GruParams& global_gru() const noexcept { return global_; }
  const nn::GruParams& local_gru() const noexcept { return local_; }

  /// True for parameters of the local head (the set regularised under alpha).
  bool is_local_param(std::size_t index) const;

  bool has_centers() const noexcept { return center_.size() > 0; }
  const nn::Vector& center() const noexcept { return center_; }
  const nn::Vector& local_center() const noexcept { return local_center_; }
  /// Stores both centers after clamping near-zero coordinates.
  void set_centers(nn::Vector center, nn::Vector local_center);

  EventId map_event(EventId e) const noexcept {
    return e < config_.vocab_size ? e : EventVocab::kUnknown;
  }

 private:
  ModelConfig config_;
  nn::ParamStore params_;
  nn::Embedding embedding_;
  nn::GruParams global_;
  nn::GruParams local_;
  nn::Vector center_;
  nn::Vector local_center_;
};

/// Coordinates with |v_i| < 1e-3 become +-1e-3 (0 maps to +1e-3).
nn::Vector clamp_center(nn::Vector v);
inline constexpr double kMinCenterMagnitude = 1e-3;

/// Global and per-window representations of one sequence.
struct Representation {
  nn::Vector global;
  /// hidden x window_count
  nn::Matrix local;
};

Representation represent(const OC4SeqModel& model, const EventSequence& seq);

/// Sets c to the mean untrained global representation and c_L to the mean
/// window representation over `train`, then freezes both.
void init_centers(OC4SeqModel& model, std::span<const EventSequence> train);

/// Center computation over precomputed representations; `local` holds one
/// matrix of window columns per sequence.
std::pair<nn::Vector, nn::Vector> compute_centers(std::span<const nn::Vector> global,
                                                  std::span<const nn::Matrix> local);

/// Squared Frobenius norm of the embedding and global GRU.
double global_param_norm(const OC4SeqModel& model);
/// Squared Frobenius norm of the local GRU.
double local_param_norm(const OC4SeqModel& model);

/// (1/B) sum ||h_N - c||^2 + lambda ||Theta||^2
double loss_global(const OC4SeqModel& model, std::span<const EventSequence> batch);
/// (1/B) sum_i sum_j ||h_ij - c_L||^2 + lambda ||Theta_L||^2
double loss_local(const OC4SeqModel& model, std::span<const EventSequence> batch);
/// loss_global + alpha * loss_local
double loss_total(const OC4SeqModel& model, std::span<const EventSequence> batch);

/// Backpropagates loss_total over the batch into the gradient buffers
/// (accumulating) and returns the loss value. `scale` multiplies both.
double accumulate_gradients(OC4SeqModel& model, std::span<const EventSequence> batch,
                            double scale = 1.0);

/// Finite-difference check of accumulate_gradients against loss_total.
double grad_check(OC4SeqModel& model, std::span<const EventSequence> batch, double delta);

struct TrainResult {
  OC4SeqModel model;
  /// Sample-weighted mean batch loss per epoch.
  std::vector<double> loss_history;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

/// Seeded init, center init, then `epochs` passes of shuffled mini-batch
/// Adam on loss_total. Throws NumericError on a non-finite loss.
TrainResult train(std::span<const EventSequence> train, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});
TrainResult train(const DatasetSplit& dataset, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

struct ScoreReport {
  std::string id;
  double global_score = 0.0;
  std::vector<double> local_scores;
  double combined = 0.0;

  double local_max() const;
  double local_mean() const;
};

ScoreReport score(const OC4SeqModel& model, const EventSequence& seq);

/// combined = global + alpha * aggregate(local)
double combine_scores(double global, std::span<const double> local, double alpha,
                      Aggregation agg);

/// F1-maximising threshold over midpoints of sorted distinct scores and
/// +-infinity, predicting abnormal when score > tau. Ties go to the smaller tau.
double choose_threshold(std::span<const double> scores, std::span<const Label> labels);

}  // namespace oc4seq
