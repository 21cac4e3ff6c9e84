#include "oc4seq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <numeric>

#include "oc4seq/errors.hpp"

namespace oc4seq {

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport prf(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) throw DataError("predictions and labels differ in length");
  EvalReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == Label::kAbnormal;
    const bool t = truth[i] == Label::kAbnormal;
    if (p && t) ++r.tp;
    else if (p) ++r.fp;
    else if (t) ++r.fn;
    else ++r.tn;
  }
  if (r.tp + r.fn == 0) throw DataError("no abnormal sequences in the ground truth");
  r.precision = r.tp + r.fp == 0 ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

EvalReport evaluate_at_threshold(std::span<const double> scores,
                                 std::span<const Label> truth, double threshold) {
  std::vector<Label> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predicted[i] = scores[i] > threshold ? Label::kAbnormal : Label::kNormal;
  }
  EvalReport r = prf(predicted, truth);
  r.threshold = threshold;
  return r;
}

PRCurve pr_curve(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size()) throw DataError("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto positives = static_cast<std::size_t>(
      std::count(truth.begin(), truth.end(), Label::kAbnormal));
  if (positives == 0 || positives == truth.size()) {
    throw DataError("a PR curve needs both normal and abnormal sequences");
  }

  PRCurve curve;
  std::size_t tp = 0, fp = 0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      (truth[order[i]] == Label::kAbnormal ? tp : fp) += 1;
    }
    PRPoint pt;
    pt.threshold = s;
    pt.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    pt.recall = static_cast<double>(tp) / static_cast<double>(positives);
    curve.average_precision += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
    curve.points.push_back(pt);
  }
  return curve;
}

std::string pr_curve_csv(const PRCurve& curve) {
  std::string out = "threshold,precision,recall\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{:.17g},{:.17g},{:.17g}\n", p.threshold, p.precision, p.recall);
  }
  return out;
}

std::vector<ProjectedPoint> project_2d(std::span<const nn::Vector> reps,
                                       std::span<const Label> labels) {
  if (reps.size() < 3) throw DataError("projection needs at least 3 vectors");
  if (reps.size() != labels.size()) throw DataError("representations and labels differ in length");
  const Eigen::Index dim = reps.front().size();
  nn::Matrix data(static_cast<Eigen::Index>(reps.size()), dim);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].size() != dim) throw DataError("representations differ in dimension");
    data.row(static_cast<Eigen::Index>(i)) = reps[i].transpose();
  }
  const nn::Vector mean = data.colwise().mean().transpose();
  data.rowwise() -= mean.transpose();

  Eigen::JacobiSVD<nn::Matrix> svd(data, Eigen::ComputeThinV);
  nn::Matrix basis = nn::Matrix::Zero(dim, 2);
  const Eigen::Index k = std::min<Eigen::Index>(2, svd.matrixV().cols());
  for (Eigen::Index c = 0; c < k; ++c) {
    nn::Vector v = svd.matrixV().col(c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    basis.col(c) = v;
  }
  const nn::Matrix projected = data * basis;
  std::vector<ProjectedPoint> out(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    out[i] = {projected(static_cast<Eigen::Index>(i), 0),
              projected(static_cast<Eigen::Index>(i), 1), labels[i]};
  }
  return out;
}

std::string projection_csv(std::span<const ProjectedPoint> points) {
  std::string out = "x,y,label\n";
  for (const auto& p : points) {
    out += fmt::format("{:.17g},{:.17g},{}\n", p.x, p.y, to_string(p.label));
  }
  return out;
}

std::string eval_report_json(const EvalReport& r, double average_precision) {
  nlohmann::json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["tn"] = r.tn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  if (std::isfinite(r.threshold)) {
    j["threshold"] = r.threshold;
  } else {
    j["threshold"] = r.threshold > 0 ? "inf" : "-inf";
  }
  j["average_precision"] = average_precision;
  return j.dump(2) + "\n";
}

}  // namespace oc4seq
