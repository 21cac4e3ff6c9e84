#include "oc4seq/nn.hpp"

#include <cmath>
#include <random>

#include "oc4seq/errors.hpp"

namespace oc4seq::nn {

std::size_t ParamStore::add(std::string name, Eigen::Index rows,
                            Eigen::Index cols, double init_bound) {
  if (rows <= 0 || cols <= 0) throw ConfigError("parameter '" + name + "' has an empty shape");
  if (contains(name)) throw ConfigError("duplicate parameter '" + name + "'");
  params_.push_back(Param{std::move(name), Matrix::Zero(rows, cols),
                          Matrix::Zero(rows, cols), init_bound});
  return params_.size() - 1;
}

std::size_t ParamStore::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

bool ParamStore::contains(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return true;
  }
  return false;
}

Param& ParamStore::at(std::string_view name) { return params_[index_of(name)]; }
const Param& ParamStore::at(std::string_view name) const { return params_[index_of(name)]; }

std::size_t ParamStore::num_values() const noexcept {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

bool ParamStore::all_finite() const {
  for (const auto& p : params_) {
    if (!p.value.allFinite()) return false;
  }
  return true;
}

void init_params(ParamStore& store, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& p : store.params()) {
    std::uniform_real_distribution<double> dist(-p.init_bound, p.init_bound);
    // Row-major draw order so the stream maps onto the serialised layout.
    for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.value.cols(); ++j) {
        p.value(i, j) = p.init_bound > 0.0 ? dist(rng) : 0.0;
      }
    }
    p.grad.setZero();
  }
}

Embedding add_embedding(ParamStore& store, std::string name, std::size_t dim,
                        std::size_t vocab_size) {
  return Embedding{store.add(std::move(name), static_cast<Eigen::Index>(dim),
                             static_cast<Eigen::Index>(vocab_size), 0.1)};
}

Vector embed_forward(const ParamStore& store, Embedding emb, EventId event) {
  const Matrix& e = store[emb.param].value;
  if (event >= static_cast<std::size_t>(e.cols())) {
    throw ConfigError("event id " + std::to_string(event) +
                      " outside the embedding vocabulary of size " +
                      std::to_string(e.cols()));
  }
  return e.col(static_cast<Eigen::Index>(event));
}

void embed_backward(ParamStore& store, Embedding emb, EventId event,
                    const Eigen::Ref<const Vector>& dx) {
  Matrix& g = store[emb.param].grad;
  if (event >= static_cast<std::size_t>(g.cols())) {
    throw ConfigError("event id " + std::to_string(event) + " outside the embedding vocabulary");
  }
  g.col(static_cast<Eigen::Index>(event)) += dx;
}

GruParams add_gru(ParamStore& store, const std::string& prefix,
                  std::size_t input_dim, std::size_t hidden, std::size_t layers) {
  if (input_dim == 0 || hidden == 0 || layers == 0) {
    throw ConfigError("GRU dimensions must be positive");
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  const auto h = static_cast<Eigen::Index>(hidden);
  GruParams gru;
  gru.input_dim = input_dim;
  gru.hidden = hidden;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto d_in = static_cast<Eigen::Index>(l == 0 ? input_dim : hidden);
    const std::string p = prefix + "." + std::to_string(l) + ".";
    GruLayer layer;
    layer.w_z = store.add(p + "W_z", h, d_in, bound);
    layer.u_z = store.add(p + "U_z", h, h, bound);
    layer.w_r = store.add(p + "W_r", h, d_in, bound);
    layer.u_r = store.add(p + "U_r", h, h, bound);
    layer.w = store.add(p + "W", h, d_in, bound);
    layer.u = store.add(p + "U", h, h, bound);
    gru.layers.push_back(layer);
  }
  return gru;
}

namespace {

Matrix apply_sigmoid(const Matrix& a) { return a.unaryExpr([](double v) { return sigmoid(v); }); }

}  // namespace

Matrix gru_cell_forward(const ParamStore& store, const GruLayer& layer,
                        const Matrix& x, const Matrix& h_prev,
                        GruStepCache* cache) {
  const Matrix& w_z = store[layer.w_z].value;
  const Matrix& u_z = store[layer.u_z].value;
  if (x.rows() != w_z.cols() || h_prev.rows() != u_z.cols() ||
      x.cols() != h_prev.cols()) {
    throw ConfigError("GRU cell: input/state shapes do not match the layer");
  }
  Matrix z = apply_sigmoid(w_z * x + u_z * h_prev);
  Matrix r = apply_sigmoid(store[layer.w_r].value * x + store[layer.u_r].value * h_prev);
  Matrix candidate = (store[layer.w].value * x +
                      store[layer.u].value * r.cwiseProduct(h_prev))
                         .array()
                         .tanh()
                         .matrix();
  Matrix h = (z.array() * h_prev.array() + (1.0 - z.array()) * candidate.array()).matrix();
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->candidate = std::move(candidate);
  }
  return h;
}

void gru_cell_backward(ParamStore& store, const GruLayer& layer,
                       const GruStepCache& c, const Matrix& dh, Matrix& dx,
                       Matrix& dh_prev) {
  const auto z = c.z.array();
  const auto r = c.r.array();
  const auto cand = c.candidate.array();
  const auto h = c.h_prev.array();
  const auto g = dh.array();

  const Matrix da_c = (g * (1.0 - z) * (1.0 - cand.square())).matrix();
  const Matrix da_z = (g * (h - cand) * z * (1.0 - z)).matrix();
  const Matrix rh = (r * h).matrix();

  const Matrix& w = store[layer.w].value;
  const Matrix& u = store[layer.u].value;
  store[layer.w].grad.noalias() += da_c * c.x.transpose();
  store[layer.u].grad.noalias() += da_c * rh.transpose();
  const Matrix d_rh = u.transpose() * da_c;
  const Matrix da_r = (d_rh.array() * h * r * (1.0 - r)).matrix();

  store[layer.w_r].grad.noalias() += da_r * c.x.transpose();
  store[layer.u_r].grad.noalias() += da_r * c.h_prev.transpose();
  store[layer.w_z].grad.noalias() += da_z * c.x.transpose();
  store[layer.u_z].grad.noalias() += da_z * c.h_prev.transpose();

  dx.noalias() = w.transpose() * da_c;
  dx.noalias() += store[layer.w_r].value.transpose() * da_r;
  dx.noalias() += store[layer.w_z].value.transpose() * da_z;

  dh_prev = (g * z + d_rh.array() * r).matrix();
  dh_prev.noalias() += store[layer.u_r].value.transpose() * da_r;
  dh_prev.noalias() += store[layer.u_z].value.transpose() * da_z;
}

GruOutput gru_sequence_forward(const ParamStore& store, const GruParams& gru,
                               std::span<const Matrix> xs) {
  if (xs.empty()) throw DataError("GRU forward needs at least one step");
  const Eigen::Index batch = xs.front().cols();
  const auto hidden = static_cast<Eigen::Index>(gru.hidden);
  GruOutput out;
  out.cache.steps.resize(gru.layers.size());

  std::vector<Matrix> inputs(xs.begin(), xs.end());
  for (std::size_t l = 0; l < gru.layers.size(); ++l) {
    auto& steps = out.cache.steps[l];
    steps.resize(inputs.size());
    Matrix h = Matrix::Zero(hidden, batch);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      h = gru_cell_forward(store, gru.layers[l], inputs[t], h, &steps[t]);
      inputs[t] = h;
    }
  }
  out.final_h = inputs.back();
  out.all_h = std::move(inputs);
  return out;
}

std::vector<Matrix> gru_sequence_backward(ParamStore& store, const GruParams& gru,
                                          const GruCache& cache,
                                          std::span<const Matrix> d_all_h) {
  if (cache.steps.size() != gru.layers.size() || cache.steps.empty() ||
      cache.steps.front().empty()) {
    throw ConfigError("GRU backward: missing or mismatched forward cache");
  }
  const std::size_t steps = cache.steps.front().size();
  if (d_all_h.size() != steps) throw ConfigError("GRU backward: gradient count does not match steps");

  // Gradient w.r.t. the outputs of the layer currently being processed.
  std::vector<Matrix> d_out(d_all_h.begin(), d_all_h.end());
  Matrix dx, dh_prev;
  for (std::size_t l = gru.layers.size(); l-- > 0;) {
    const auto& layer_cache = cache.steps[l];
    if (layer_cache.size() != steps) throw ConfigError("GRU backward: ragged cache");
    const Matrix& ref = layer_cache.back().h_prev;
    Matrix carry = Matrix::Zero(ref.rows(), ref.cols());
    std::vector<Matrix> d_in(steps);
    for (std::size_t t = steps; t-- > 0;) {
      if (d_out[t].size() != 0) carry += d_out[t];
      gru_cell_backward(store, gru.layers[l], layer_cache[t], carry, dx, dh_prev);
      d_in[t] = dx;
      carry = dh_prev;
    }
    d_out = std::move(d_in);
  }
  return d_out;
}

std::vector<Matrix> gru_sequence_backward_final(ParamStore& store,
                                                const GruParams& gru,
                                                const GruCache& cache,
                                                const Matrix& d_final) {
  if (cache.steps.empty() || cache.steps.front().empty()) {
    throw ConfigError("GRU backward: missing forward cache");
  }
  std::vector<Matrix> d_all(cache.steps.front().size());
  d_all.back() = d_final;
  return gru_sequence_backward(store, gru, cache, d_all);
}

AdamState make_adam(const ParamStore& store) {
  AdamState state;
  for (const auto& p : store.params()) {
    state.m.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    state.v.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
  return state;
}

void adam_step(ParamStore& store, AdamState& state, double lr) {
  if (state.m.size() != store.size()) throw ConfigError("Adam state does not match the parameter store");
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < store.size(); ++i) {
    Param& p = store[i];
    auto m = state.m[i].array();
    auto v = state.v[i].array();
    const auto g = p.grad.array();
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.square();
    p.value.array() -= lr * (m / c1) / ((v / c2).sqrt() + state.eps);
    p.grad.setZero();
  }
}

double grad_check(ParamStore& store, const std::function<double()>& loss,
                  const std::function<void()>& gradients, double delta) {
  if (!(delta > 0.0)) throw ConfigError("finite-difference step must be positive");
  store.zero_grad();
  gradients();
  std::vector<Matrix> analytic;
  for (const auto& p : store.params()) analytic.push_back(p.grad);

  double worst = 0.0;
  for (std::size_t i = 0; i < store.size(); ++i) {
    Matrix& value = store[i].value;
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      const double saved = value.data()[k];
      value.data()[k] = saved + delta;
      const double plus = loss();
      value.data()[k] = saved - delta;
      const double minus = loss();
      value.data()[k] = saved;
      const double numeric = (plus - minus) / (2.0 * delta);
      const double a = analytic[i].data()[k];
      const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace oc4seq::nn
