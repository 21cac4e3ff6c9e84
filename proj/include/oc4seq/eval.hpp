#pragma once

#include <span>
#include <string>
#include <vector>

#include "oc4seq/nn.hpp"
#include "oc4seq/sequences.hpp"

namespace oc4seq {

/// Confusion counts and derived metrics, abnormal being the positive class.
struct EvalReport {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double threshold = 0.0;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

EvalReport prf(std::span<const Label> predicted, std::span<const Label> truth);

/// prf() with predictions `score > threshold`.
EvalReport evaluate_at_threshold(std::span<const double> scores,
                                 std::span<const Label> truth, double threshold);

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PRCurve {
  /// One point per distinct score, thresholds descending (predict abnormal
  /// when score >= threshold), so recall is non-decreasing along the list.
  std::vector<PRPoint> points;
  double average_precision = 0.0;
};

/// Step-wise AP = sum_k (R_k - R_{k-1}) P_k.
PRCurve pr_curve(std::span<const double> scores, std::span<const Label> truth);

/// "threshold,precision,recall"
std::string pr_curve_csv(const PRCurve& curve);

struct ProjectedPoint {
  double x = 0.0;
  double y = 0.0;
  Label label = Label::kNormal;
};

/// Mean-centred projection onto the two leading principal directions.
std::vector<ProjectedPoint> project_2d(std::span<const nn::Vector> reps,
                                       std::span<const Label> labels);

/// "x,y,label"
std::string projection_csv(std::span<const ProjectedPoint> points);

std::string eval_report_json(const EvalReport& report, double average_precision);

}  // namespace oc4seq
