#pragma once

#include <span>
#include <string>

#include "oc4seq/nn.hpp"
#include "oc4seq/sequences.hpp"

namespace oc4seq {

/// Sequences x event types occurrence counts. Ids outside the vocabulary
/// are counted in column 0.
struct CountMatrix {
  nn::Matrix counts;
};

nn::Vector count_vector(const EventSequence& seq, std::size_t vocab_size);
CountMatrix count_matrix(std::span<const EventSequence> seqs, std::size_t vocab_size);

/// Principal subspace of normal count vectors; the anomaly score is the
/// squared residual outside it.
struct PCAModel {
  nn::Vector mean;
  /// vocab_size x k, orthonormal columns.
  nn::Matrix basis;
  /// Fraction of variance captured by `basis` (1 for zero-variance data).
  double retained_variance = 0.0;

  std::size_t vocab_size() const noexcept { return static_cast<std::size_t>(mean.size()); }
  std::size_t components() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

inline constexpr double kPcaVarianceRetention = 0.95;

PCAModel fit_pca(const CountMatrix& train, double retention = kPcaVarianceRetention);

double pca_score(const PCAModel& model, const nn::Vector& counts);
double pca_score(const PCAModel& model, const EventSequence& seq);

std::string pca_model_json(const PCAModel& model);
PCAModel pca_model_from_json(const std::string& text);

}  // namespace oc4seq
