#include "oc4seq/baselines.hpp"

#include <nlohmann/json.hpp>

#include "oc4seq/errors.hpp"
#include "oc4seq/serialize.hpp"

namespace oc4seq {

nn::Vector count_vector(const EventSequence& seq, std::size_t vocab_size) {
  nn::Vector v = nn::Vector::Zero(static_cast<Eigen::Index>(vocab_size));
  for (EventId e : seq.events) v[e < vocab_size ? e : EventVocab::kUnknown] += 1.0;
  return v;
}

CountMatrix count_matrix(std::span<const EventSequence> seqs, std::size_t vocab_size) {
  CountMatrix m{nn::Matrix::Zero(static_cast<Eigen::Index>(seqs.size()),
                                 static_cast<Eigen::Index>(vocab_size))};
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    m.counts.row(static_cast<Eigen::Index>(i)) = count_vector(seqs[i], vocab_size).transpose();
  }
  return m;
}

PCAModel fit_pca(const CountMatrix& train, double retention) {
  const nn::Matrix& x = train.counts;
  if (x.rows() < 2) throw DataError("PCA needs at least 2 training sequences");
  if (!(retention > 0.0 && retention <= 1.0)) throw ConfigError("variance retention must be in (0, 1]");

  PCAModel model;
  model.mean = x.colwise().mean().transpose();
  const nn::Matrix centered = x.rowwise() - model.mean.transpose();
  Eigen::JacobiSVD<nn::Matrix> svd(centered, Eigen::ComputeThinV);
  const nn::Vector var = svd.singularValues().array().square().matrix();
  const double total = var.sum();

  if (total <= 0.0) {
    model.basis = nn::Matrix::Zero(x.cols(), 1);
    model.basis(0, 0) = 1.0;
    model.retained_variance = 1.0;
    return model;
  }
  Eigen::Index k = 0;
  double kept = 0.0;
  while (k < var.size()) {
    kept += var[k++];
    if (kept / total >= retention - 1e-12) break;
  }
  model.basis = svd.matrixV().leftCols(k);
  model.retained_variance = kept / total;
  return model;
}

double pca_score(const PCAModel& model, const nn::Vector& counts) {
  if (counts.size() != model.mean.size()) throw DataError("count vector size does not match the PCA model");
  const nn::Vector y = counts - model.mean;
  const nn::Vector residual = y - model.basis * (model.basis.transpose() * y);
  return residual.squaredNorm();
}

double pca_score(const PCAModel& model, const EventSequence& seq) {
  return pca_score(model, count_vector(seq, model.vocab_size()));
}

std::string pca_model_json(const PCAModel& model) {
  std::string out = "{\"format\":\"oc4seq-pca\",\"version\":1,\"retained_variance\":";
  out += serialize::format_double(model.retained_variance);
  out += ",\"mean\":";
  out += serialize::vector_json(model.mean);
  out += ",\"basis\":";
  out += serialize::matrix_json(model.basis);
  out += "}\n";
  return out;
}

PCAModel pca_model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid PCA model JSON: ") + e.what());
  }
  if (j.value("format", "") != "oc4seq-pca" || j.value("version", 0) != 1) {
    throw DataError("not an oc4seq-pca version 1 document");
  }
  PCAModel model;
  model.retained_variance = j.at("retained_variance").get<double>();
  model.mean = serialize::vector_from_json(j.at("mean"));
  model.basis = serialize::matrix_from_json(j.at("basis"));
  if (model.basis.rows() != model.mean.size()) throw DataError("PCA basis does not match the mean");
  return model;
}

}  // namespace oc4seq
