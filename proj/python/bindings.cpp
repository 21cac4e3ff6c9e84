#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "oc4seq/baselines.hpp"
#include "oc4seq/checkpoint.hpp"
#include "oc4seq/errors.hpp"
#include "oc4seq/eval.hpp"
#include "oc4seq/model.hpp"
#include "oc4seq/synthetic.hpp"

namespace py = pybind11;
using namespace oc4seq;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-scale one-class GRU anomaly detection for discrete event sequences";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::enum_<Label>(m, "Label")
      .value("NORMAL", Label::kNormal)
      .value("ABNORMAL", Label::kAbnormal);

  py::enum_<Aggregation>(m, "Aggregation")
      .value("MAX", Aggregation::kMax)
      .value("MEAN", Aggregation::kMean);

  py::class_<EventSequence>(m, "EventSequence")
      .def(py::init<>())
      .def(py::init([](std::vector<EventId> events, Label label, std::string id) {
             return EventSequence{std::move(id), std::move(events), label};
           }),
           py::arg("events"), py::arg("label") = Label::kNormal, py::arg("id") = "")
      .def_readwrite("id", &EventSequence::id)
      .def_readwrite("events", &EventSequence::events)
      .def_readwrite("label", &EventSequence::label)
      .def("__len__", &EventSequence::length)
      .def("__repr__", [](const EventSequence& s) {
        return "<EventSequence '" + s.id + "' len=" + std::to_string(s.length()) + " " +
               to_string(s.label) + ">";
      });

  py::class_<DatasetSplit>(m, "DatasetSplit")
      .def_readonly("train", &DatasetSplit::train)
      .def_readonly("val", &DatasetSplit::val)
      .def_readonly("test", &DatasetSplit::test)
      .def_readonly("seed", &DatasetSplit::seed);

  m.def("parse_sequences", &parse_sequences, py::arg("text"), py::arg("name") = "<string>",
        py::arg("label") = Label::kNormal);
  m.def("load_sequences", &load_sequences, py::arg("path"), py::arg("label") = Label::kNormal);
  m.def("save_sequences",
        [](const std::filesystem::path& p, const std::vector<EventSequence>& s) { save_sequences(p, s); });
  m.def("vocab_size", [](const std::vector<EventSequence>& s) { return build_vocab(s).size(); });
  m.def(
      "split_dataset",
      [](const std::vector<EventSequence>& n, const std::vector<EventSequence>& a, std::size_t n_train,
         std::uint64_t seed) { return split_dataset(n, a, n_train, seed); },
      py::arg("normals"), py::arg("abnormals"), py::arg("n_train"), py::arg("seed") = 0);
  m.def("window_count", &window_count);
  m.def(
      "windows",
      [](const EventSequence& s, std::size_t m) {
        std::vector<std::vector<EventId>> out;
        for (auto w : windows(s, m)) out.emplace_back(w.begin(), w.end());
        return out;
      },
      py::arg("seq"), py::arg("m"));

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init<>())
      .def_readwrite("num_events", &ChainSpec::num_events)
      .def_readwrite("out_degree", &ChainSpec::out_degree)
      .def_readwrite("seed", &ChainSpec::seed)
      .def_readwrite("min_len", &ChainSpec::min_len)
      .def_readwrite("max_len", &ChainSpec::max_len);

  py::class_<MarkovChain>(m, "MarkovChain")
      .def(py::init<std::vector<std::vector<double>>>())
      .def_static("random", &MarkovChain::random)
      .def_property_readonly("num_events", &MarkovChain::num_events)
      .def_property_readonly("transitions", &MarkovChain::transitions)
      .def("probability", &MarkovChain::probability);

  m.def("gen_normal", py::overload_cast<const ChainSpec&, std::size_t>(&gen_normal), py::arg("spec"),
        py::arg("count"));
  m.def("gen_normal",
        py::overload_cast<const MarkovChain&, std::size_t, std::size_t, std::size_t, std::uint64_t>(&gen_normal),
        py::arg("chain"), py::arg("min_len"), py::arg("max_len"), py::arg("count"), py::arg("seed"));
  m.def("inject_local_anomaly", &inject_local_anomaly, py::arg("chain"), py::arg("seq"), py::arg("span"),
        py::arg("seed"), py::arg("spans") = 1);
  m.def("inject_global_permutation", &inject_global_permutation, py::arg("seq"), py::arg("seed"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("lr", &TrainConfig::lr)
      .def_readwrite("batch", &TrainConfig::batch)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("hidden", &TrainConfig::hidden)
      .def_readwrite("layers", &TrainConfig::layers)
      .def_readwrite("embed_dim", &TrainConfig::embed_dim)
      .def_readwrite("window", &TrainConfig::window)
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("lambda_", &TrainConfig::lambda)
      .def_readwrite("aggregation", &TrainConfig::aggregation)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<ScoreReport>(m, "ScoreReport")
      .def_readonly("id", &ScoreReport::id)
      .def_readonly("global_score", &ScoreReport::global_score)
      .def_readonly("local_scores", &ScoreReport::local_scores)
      .def_readonly("combined", &ScoreReport::combined)
      .def_property_readonly("local_max", &ScoreReport::local_max);

  py::class_<OC4SeqModel>(m, "Model")
      .def_property_readonly("alpha", [](const OC4SeqModel& md) { return md.config().alpha; })
      .def_property_readonly("hidden", [](const OC4SeqModel& md) { return md.config().hidden; })
      .def_property_readonly("window", [](const OC4SeqModel& md) { return md.config().window; })
      .def_property_readonly("vocab_size", [](const OC4SeqModel& md) { return md.config().vocab_size; })
      .def_property_readonly("center", &OC4SeqModel::center)
      .def_property_readonly("local_center", &OC4SeqModel::local_center)
      .def("score", [](const OC4SeqModel& md, const EventSequence& s) { return score(md, s); })
      .def("represent", [](const OC4SeqModel& md, const EventSequence& s) { return represent(md, s).global; })
      .def("loss", [](const OC4SeqModel& md, const std::vector<EventSequence>& b) { return loss_total(md, b); })
      .def("save", [](const OC4SeqModel& md, const std::filesystem::path& p) { save_checkpoint(p, md); })
      .def_static("load", [](const std::filesystem::path& p) { return load_checkpoint(p).model; });

  m.def(
      "train",
      [](const std::vector<EventSequence>& data, const TrainConfig& cfg) {
        TrainResult r = [&] {
          py::gil_scoped_release release;
          return train(data, cfg);
        }();
        return py::make_tuple(std::move(r.model), r.loss_history);
      },
      py::arg("train"), py::arg("config"), "Returns (model, loss_history).");

  m.def(
      "choose_threshold",
      [](const std::vector<double>& s, const std::vector<Label>& y) { return choose_threshold(s, y); },
      py::arg("scores"), py::arg("labels"));

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("tp", &EvalReport::tp)
      .def_readonly("fp", &EvalReport::fp)
      .def_readonly("fn", &EvalReport::fn)
      .def_readonly("tn", &EvalReport::tn)
      .def_readonly("precision", &EvalReport::precision)
      .def_readonly("recall", &EvalReport::recall)
      .def_readonly("f1", &EvalReport::f1)
      .def_readonly("threshold", &EvalReport::threshold);

  m.def("f1_score", &f1_score, py::arg("precision"), py::arg("recall"));
  m.def("prf", [](const std::vector<Label>& p, const std::vector<Label>& t) { return prf(p, t); },
        py::arg("predicted"), py::arg("truth"));
  m.def(
      "evaluate_at_threshold",
      [](const std::vector<double>& s, const std::vector<Label>& y, double t) {
        return evaluate_at_threshold(s, y, t);
      },
      py::arg("scores"), py::arg("truth"), py::arg("threshold"));
  m.def(
      "average_precision",
      [](const std::vector<double>& s, const std::vector<Label>& y) { return pr_curve(s, y).average_precision; },
      py::arg("scores"), py::arg("truth"));
  m.def(
      "pr_curve",
      [](const std::vector<double>& s, const std::vector<Label>& y) {
        std::vector<std::tuple<double, double, double>> pts;
        for (const auto& p : pr_curve(s, y).points) pts.emplace_back(p.threshold, p.precision, p.recall);
        return pts;
      },
      py::arg("scores"), py::arg("truth"), "List of (threshold, precision, recall).");
  m.def(
      "project_2d",
      [](const std::vector<nn::Vector>& reps) {
        const std::vector<Label> labels(reps.size(), Label::kNormal);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : project_2d(reps, labels)) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("representations"));

  py::class_<PCAModel>(m, "PCAModel")
      .def_readonly("mean", &PCAModel::mean)
      .def_readonly("basis", &PCAModel::basis)
      .def_readonly("retained_variance", &PCAModel::retained_variance)
      .def_property_readonly("components", &PCAModel::components)
      .def("score", [](const PCAModel& md, const EventSequence& s) { return pca_score(md, s); });
  m.def(
      "fit_pca",
      [](const std::vector<EventSequence>& train, double retention) {
        return fit_pca(count_matrix(train, build_vocab(train).size()), retention);
      },
      py::arg("train"), py::arg("retention") = kPcaVarianceRetention);
}
