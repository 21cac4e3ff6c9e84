#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oc4seq/sequences.hpp"

namespace oc4seq {

/// Parameters of a sparse random Markov chain over events 1..num_events.
struct ChainSpec {
  std::size_t num_events = 20;
  std::size_t out_degree = 3;
  std::uint64_t seed = 0;
  std::size_t min_len = 40;
  std::size_t max_len = 60;

  void validate() const;
};

/// First-order Markov chain over event ids 1..K with a uniform start state.
class MarkovChain {
 public:
  /// `transitions[i][j]` is P(i+1 -> j+1); rows must sum to one.
  explicit MarkovChain(std::vector<std::vector<double>> transitions);

  /// Random chain: each state gets `out_degree` distinct successors with
  /// random positive weights.
  static MarkovChain random(const ChainSpec& spec);

  std::size_t num_events() const noexcept { return rows_.size(); }
  double probability(EventId from, EventId to) const noexcept;
  const std::vector<std::vector<double>>& transitions() const noexcept { return rows_; }

  EventId sample_start(std::mt19937_64& rng) const;
  EventId sample_next(EventId from, std::mt19937_64& rng) const;

 private:
  std::vector<std::vector<double>> rows_;
};

/// `count` sequences sampled from the chain described by `spec`, lengths
/// uniform in [min_len, max_len].
std::vector<EventSequence> gen_normal(const ChainSpec& spec, std::size_t count);

std::vector<EventSequence> gen_normal(const MarkovChain& chain,
                                      std::size_t min_len, std::size_t max_len,
                                      std::size_t count, std::uint64_t seed);

/// Replaces `spans` contiguous runs of length min(span, N) with events whose
/// incoming transitions have zero probability under `chain`. Length is
/// preserved; the result is labeled abnormal.
EventSequence inject_local_anomaly(const MarkovChain& chain,
                                   const EventSequence& seq, std::size_t span,
                                   std::uint64_t seed, std::size_t spans = 1);

/// Uniformly shuffles the events; the count profile is unchanged.
EventSequence inject_global_permutation(const EventSequence& seq,
                                        std::uint64_t seed);

}  // namespace oc4seq
