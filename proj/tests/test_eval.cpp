#include <doctest.h>

#include <random>

#include "oc4seq/errors.hpp"
#include "oc4seq/eval.hpp"
#include "oracles.hpp"

using namespace oc4seq;
using L = Label;

TEST_CASE("f1 of reference precision/recall pairs") {
  CHECK(std::abs(f1_score(0.955, 0.998) - 0.976) <= 0.0005);
  CHECK(std::abs(f1_score(0.968, 0.471) - 0.634) <= 0.0005);
  CHECK(f1_score(0.0, 0.0) == 0.0);
  CHECK(f1_score(1.0, 1.0) == 1.0);
}

TEST_CASE("prf counts") {
  std::vector<L> pred, truth;
  for (int i = 0; i < 8; ++i) { pred.push_back(L::kAbnormal); truth.push_back(L::kAbnormal); }
  for (int i = 0; i < 2; ++i) { pred.push_back(L::kAbnormal); truth.push_back(L::kNormal); }
  for (int i = 0; i < 5; ++i) { pred.push_back(L::kNormal); truth.push_back(L::kNormal); }
  const EvalReport r = prf(pred, truth);
  CHECK(r.tp == 8);
  CHECK(r.fp == 2);
  CHECK(r.fn == 0);
  CHECK(r.tn == 5);
  CHECK(r.precision == doctest::Approx(0.8));
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == doctest::Approx(8.0 / 9.0));

  const std::vector<L> none(3, L::kNormal);
  const EvalReport z = prf(none, std::vector<L>{L::kAbnormal, L::kNormal, L::kNormal});
  CHECK(z.precision == 0.0);
  CHECK(z.f1 == 0.0);

  CHECK_THROWS_AS(prf(none, std::vector<L>{L::kAbnormal}), DataError);
  CHECK_THROWS_AS(prf(none, none), DataError);
}

TEST_CASE("evaluate_at_threshold uses a strict comparison") {
  const std::vector<double> s{0.1, 0.5, 0.9};
  const std::vector<L> y{L::kNormal, L::kAbnormal, L::kAbnormal};
  const EvalReport r = evaluate_at_threshold(s, y, 0.5);
  CHECK(r.tp == 1);
  CHECK(r.fn == 1);
  CHECK(r.threshold == 0.5);
}

TEST_CASE("average precision") {
  SUBCASE("perfect separation") {
    const std::vector<double> s{0.1, 0.2, 0.8, 0.9};
    const std::vector<L> y{L::kNormal, L::kNormal, L::kAbnormal, L::kAbnormal};
    CHECK(pr_curve(s, y).average_precision == 1.0);
  }
  SUBCASE("equal scores give the prevalence") {
    const std::vector<double> s(10, 0.4);
    std::vector<L> y(10, L::kNormal);
    y[1] = y[6] = y[7] = L::kAbnormal;
    const PRCurve c = pr_curve(s, y);
    CHECK(c.average_precision == doctest::Approx(0.3));
    CHECK(c.points.size() == 1);
  }
  SUBCASE("matches brute force and ignores monotone transforms") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coarse(0, 40);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> s(100);
      std::vector<L> y(100);
      std::vector<bool> pos(100);
      for (int i = 0; i < 100; ++i) {
        pos[i] = rng() % 3 == 0;
        y[i] = pos[i] ? L::kAbnormal : L::kNormal;
        s[i] = trial % 2 ? coarse(rng) / 7.0 : std::uniform_real_distribution<double>(0, 1)(rng);
      }
      const double ap = pr_curve(s, y).average_precision;
      CHECK(std::abs(ap - oracle::average_precision(s, pos)) <= 1e-12);
      std::vector<double> t(s);
      for (double& v : t) v = std::exp(3.0 * v) + 2.0;
      CHECK(std::abs(pr_curve(t, y).average_precision - ap) <= 1e-12);
    }
  }
  SUBCASE("curve points are ordered by recall") {
    const std::vector<double> s{0.3, 0.1, 0.7, 0.7, 0.2};
    const std::vector<L> y{L::kAbnormal, L::kNormal, L::kAbnormal, L::kNormal, L::kNormal};
    const PRCurve c = pr_curve(s, y);
    REQUIRE(c.points.size() == 4);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      CHECK(c.points[i].recall >= c.points[i - 1].recall);
      CHECK(c.points[i].threshold < c.points[i - 1].threshold);
    }
    CHECK(c.points.back().recall == 1.0);
    CHECK(pr_curve_csv(c).rfind("threshold,precision,recall\n", 0) == 0);
  }
  const std::vector<double> s{0.1, 0.2};
  CHECK_THROWS_AS(pr_curve(s, std::vector<L>{L::kNormal, L::kNormal}), DataError);
}

TEST_CASE("project_2d") {
  using nn::Vector;
  SUBCASE("collinear points land on the first axis") {
    std::vector<Vector> reps;
    std::vector<L> y;
    const Vector dir = (Vector(3) << 1, 2, 2).finished() / 3.0;
    for (double t : {-2.0, -0.5, 0.0, 1.0, 1.5}) {
      reps.push_back(t * dir + Vector::Constant(3, 0.25));
      y.push_back(L::kNormal);
    }
    const auto pts = project_2d(reps, y);
    double mean_t = 0.0;
    for (double t : {-2.0, -0.5, 0.0, 1.0, 1.5}) mean_t += t / 5.0;
    const std::vector<double> ts{-2.0, -0.5, 0.0, 1.0, 1.5};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(std::abs(pts[i].x) - std::abs(ts[i] - mean_t)) < 1e-12);
      CHECK(std::abs(pts[i].y) < 1e-12);
    }
  }
  SUBCASE("projection never expands distances") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    std::vector<Vector> reps;
    std::vector<L> y;
    for (int i = 0; i < 30; ++i) {
      Vector v(6);
      for (int k = 0; k < 6; ++k) v(k) = n(rng);
      reps.push_back(v);
      y.push_back(i % 5 ? L::kNormal : L::kAbnormal);
    }
    const auto pts = project_2d(reps, y);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts[i].label == y[i]);
      for (std::size_t j = 0; j < i; ++j) {
        const double d2 = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        CHECK(d2 <= (reps[i] - reps[j]).norm() + 1e-12);
      }
    }
    CHECK(projection_csv(pts).rfind("x,y,label\n", 0) == 0);
  }
  const std::vector<Vector> two{Vector::Zero(2), Vector::Ones(2)};
  CHECK_THROWS_AS(project_2d(two, std::vector<L>{L::kNormal, L::kNormal}), DataError);
}

TEST_CASE("eval report json") {
  EvalReport r;
  r.tp = 3;
  r.f1 = 0.75;
  r.threshold = -std::numeric_limits<double>::infinity();
  const std::string j = eval_report_json(r, 0.5);
  CHECK(j.find("\"tp\"") != std::string::npos);
  CHECK(j.find("-inf") != std::string::npos);
}
