#pragma once

// Numeric kernel: parameter storage, embedding lookup, a bias-free stacked
// GRU with backpropagation through time, Adam and finite-difference checks.
//
// Activations are column-batched: an input of shape (d_in x B) runs B
// independent sequences of equal length in lock step.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oc4seq/sequences.hpp"

namespace oc4seq::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Logistic function, evaluated without overflow for any finite input.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  /// Half-width of the uniform initialisation range.
  double init_bound = 0.0;
};

/// Owns every trainable matrix together with a gradient buffer of the same
/// shape. Handles are indices, stable across copies of the store.
class ParamStore {
 public:
  std::size_t add(std::string name, Eigen::Index rows, Eigen::Index cols,
                  double init_bound);

  Param& operator[](std::size_t i) { return params_[i]; }
  const Param& operator[](std::size_t i) const { return params_[i]; }
  Param& at(std::string_view name);
  const Param& at(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::span<Param> params() { return params_; }
  std::span<const Param> params() const { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  /// Total number of scalar parameters.
  std::size_t num_values() const noexcept;

  void zero_grad();
  bool all_finite() const;

 private:
  std::vector<Param> params_;
};

/// Draws every parameter uniformly from [-init_bound, init_bound], in
/// insertion order, from a generator seeded with `seed`.
void init_params(ParamStore& store, std::uint64_t seed);

/// Embedding matrix of shape d_e x |E|.
struct Embedding {
  std::size_t param = 0;
};

Embedding add_embedding(ParamStore& store, std::string name, std::size_t dim,
                        std::size_t vocab_size);

/// Column `event` of the embedding matrix.
Vector embed_forward(const ParamStore& store, Embedding emb, EventId event);

/// Adds `dx` into column `event` of the embedding gradient.
void embed_backward(ParamStore& store, Embedding emb, EventId event,
                    const Eigen::Ref<const Vector>& dx);

/// Handles to the six matrices of one GRU layer.
struct GruLayer {
  std::size_t w_z = 0, u_z = 0, w_r = 0, u_r = 0, w = 0, u = 0;
};

struct GruParams {
  std::vector<GruLayer> layers;
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
};

/// Registers `layers` stacked GRU layers named "<prefix>.<l>.<matrix>".
GruParams add_gru(ParamStore& store, const std::string& prefix,
                  std::size_t input_dim, std::size_t hidden, std::size_t layers);

struct GruStepCache {
  Matrix x;
  Matrix h_prev;
  Matrix z;
  Matrix r;
  Matrix candidate;
};

/// One GRU step:
///   z = sigmoid(W_z x + U_z h), r = sigmoid(W_r x + U_r h),
///   c = tanh(W x + U (r . h)),  h' = z . h + (1 - z) . c
Matrix gru_cell_forward(const ParamStore& store, const GruLayer& layer,
                        const Matrix& x, const Matrix& h_prev,
                        GruStepCache* cache = nullptr);

/// Backward through one step given dL/dh'. Accumulates weight gradients and
/// writes dL/dx and dL/dh_prev.
void gru_cell_backward(ParamStore& store, const GruLayer& layer,
                       const GruStepCache& cache, const Matrix& dh,
                       Matrix& dx, Matrix& dh_prev);

struct GruCache {
  /// steps[layer][t]
  std::vector<std::vector<GruStepCache>> steps;
};

struct GruOutput {
  Matrix final_h;
  /// Top-layer state after each step.
  std::vector<Matrix> all_h;
  GruCache cache;
};

/// Runs the stack from a zero state at every layer.
GruOutput gru_sequence_forward(const ParamStore& store, const GruParams& gru,
                               std::span<const Matrix> xs);

/// BPTT. `d_all_h[t]` is dL/d(top-layer state at step t); an empty matrix
/// means zero. Returns dL/dx_t for every step.
std::vector<Matrix> gru_sequence_backward(ParamStore& store, const GruParams& gru,
                                          const GruCache& cache,
                                          std::span<const Matrix> d_all_h);

/// Same as above with a gradient on the final state only.
std::vector<Matrix> gru_sequence_backward_final(ParamStore& store,
                                                const GruParams& gru,
                                                const GruCache& cache,
                                                const Matrix& d_final);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

AdamState make_adam(const ParamStore& store);

/// Bias-corrected Adam update followed by zeroing every gradient.
void adam_step(ParamStore& store, AdamState& state, double lr);

/// Central-difference check of analytic gradients.
///
/// `loss` evaluates the objective at the current parameter values and
/// `gradients` fills the gradient buffers (after they are zeroed). Returns
/// max over coordinates of |a - n| / max(1e-8, |a| + |n|).
double grad_check(ParamStore& store, const std::function<double()>& loss,
                  const std::function<void()>& gradients, double delta);

}  // namespace oc4seq::nn
