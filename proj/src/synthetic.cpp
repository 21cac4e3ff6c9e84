#include "oc4seq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oc4seq/errors.hpp"

namespace oc4seq {

void ChainSpec::validate() const {
  if (num_events < 2) throw ConfigError("chain needs at least 2 event types");
  if (out_degree < 1) throw ConfigError("out_degree must be at least 1");
  if (out_degree > num_events) {
    throw ConfigError("out_degree (" + std::to_string(out_degree) +
                      ") exceeds the number of event types (" +
                      std::to_string(num_events) + ")");
  }
  if (min_len < 1 || min_len > max_len) {
    throw ConfigError("length range must satisfy 1 <= min_len <= max_len");
  }
}

MarkovChain::MarkovChain(std::vector<std::vector<double>> transitions)
    : rows_(std::move(transitions)) {
  if (rows_.size() < 2) throw ConfigError("chain needs at least 2 event types");
  for (const auto& row : rows_) {
    if (row.size() != rows_.size()) throw ConfigError("transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw ConfigError("transition probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("transition rows must sum to 1");
  }
}

MarkovChain MarkovChain::random(const ChainSpec& spec) {
  spec.validate();
  const std::size_t k = spec.num_events;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
  std::vector<std::size_t> states(k);
  for (auto& row : rows) {
    std::iota(states.begin(), states.end(), 0);
    std::shuffle(states.begin(), states.end(), rng);
    double total = 0.0;
    for (std::size_t i = 0; i < spec.out_degree; ++i) {
      row[states[i]] = weight(rng);
      total += row[states[i]];
    }
    for (double& p : row) p /= total;
  }
  return MarkovChain(std::move(rows));
}

double MarkovChain::probability(EventId from, EventId to) const noexcept {
  if (from < 1 || to < 1 || from > rows_.size() || to > rows_.size()) return 0.0;
  return rows_[from - 1][to - 1];
}

EventId MarkovChain::sample_start(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> pick(1, rows_.size());
  return static_cast<EventId>(pick(rng));
}

EventId MarkovChain::sample_next(EventId from, std::mt19937_64& rng) const {
  const auto& row = rows_[from - 1];
  std::discrete_distribution<std::size_t> next(row.begin(), row.end());
  return static_cast<EventId>(next(rng) + 1);
}

std::vector<EventSequence> gen_normal(const MarkovChain& chain,
                                      std::size_t min_len, std::size_t max_len,
                                      std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("count must be at least 1");
  if (min_len < 1 || min_len > max_len) {
    throw ConfigError("length range must satisfy 1 <= min_len <= max_len");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length(min_len, max_len);
  std::vector<EventSequence> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& seq = out[i];
    seq.id = "gen:" + std::to_string(i + 1);
    seq.label = Label::kNormal;
    const std::size_t n = length(rng);
    seq.events.reserve(n);
    seq.events.push_back(chain.sample_start(rng));
    while (seq.events.size() < n) seq.events.push_back(chain.sample_next(seq.events.back(), rng));
  }
  return out;
}

std::vector<EventSequence> gen_normal(const ChainSpec& spec, std::size_t count) {
  const MarkovChain chain = MarkovChain::random(spec);
  // Sampling uses a stream distinct from the one that built the chain.
  return gen_normal(chain, spec.min_len, spec.max_len, count,
                    spec.seed ^ 0x9e3779b97f4a7c15ULL);
}

EventSequence inject_local_anomaly(const MarkovChain& chain,
                                   const EventSequence& seq, std::size_t span,
                                   std::uint64_t seed, std::size_t spans) {
  if (span < 1) throw ConfigError("anomaly span must be at least 1");
  if (seq.events.empty()) throw DataError(seq.id + ": empty sequence");
  const std::size_t k = chain.num_events();
  std::mt19937_64 rng(seed);
  EventSequence out = seq;
  out.label = Label::kAbnormal;
  const std::size_t n = out.events.size();
  const std::size_t len = std::min(span, n);

  std::vector<EventId> candidates;
  for (std::size_t s = 0; s < spans; ++s) {
    // Keep a predecessor in front of the span whenever the sequence allows it.
    std::size_t start = 0;
    if (len < n) {
      std::uniform_int_distribution<std::size_t> pick(1, n - len);
      start = pick(rng);
    }
    for (std::size_t p = start; p < start + len; ++p) {
      const EventId original = seq.events[p];
      const bool has_prev = p > 0;
      const EventId prev = has_prev ? out.events[p - 1] : 0;
      auto collect = [&](bool exclude_original) {
        candidates.clear();
        for (EventId e = 1; e <= k; ++e) {
          if (exclude_original && e == original) continue;
          if (has_prev && chain.probability(prev, e) > 0.0) continue;
          candidates.push_back(e);
        }
      };
      collect(true);
      if (candidates.empty()) collect(false);
      if (candidates.empty()) {
        throw ConfigError("chain has no zero-probability transition out of event " +
                          std::to_string(prev));
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      out.events[p] = candidates[pick(rng)];
    }
  }
  return out;
}

EventSequence inject_global_permutation(const EventSequence& seq,
                                        std::uint64_t seed) {
  if (seq.events.size() < 2) {
    throw DataError(seq.id + ": permutation anomaly needs at least 2 events");
  }
  std::mt19937_64 rng(seed);
  EventSequence out = seq;
  std::shuffle(out.events.begin(), out.events.end(), rng);
  out.label = Label::kAbnormal;
  return out;
}

}  // namespace oc4seq
