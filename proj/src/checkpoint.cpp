#include "oc4seq/checkpoint.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "oc4seq/errors.hpp"
#include "oc4seq/io.hpp"
#include "oc4seq/serialize.hpp"

namespace oc4seq {

using serialize::format_double;

std::string checkpoint_json(const OC4SeqModel& model,
                            const std::optional<TrainConfig>& train_config) {
  if (!model.has_centers()) throw ConfigError("cannot checkpoint a model without centers");
  const ModelConfig& c = model.config();
  std::string out = "{\"format\":\"oc4seq-ckpt\",\"version\":1,\"config\":{";
  out += fmt::format(
      "\"vocab_size\":{},\"embed_dim\":{},\"hidden\":{},\"layers\":{},\"window\":{},"
      "\"alpha\":{},\"lambda\":{},\"aggregation\":\"{}\"",
      c.vocab_size, c.embed_dim, c.hidden, c.layers, c.window, format_double(c.alpha),
      format_double(c.lambda), to_string(c.aggregation));
  if (train_config) {
    out += fmt::format(",\"train\":{{\"lr\":{},\"batch\":{},\"epochs\":{},\"seed\":{}}}",
                       format_double(train_config->lr), train_config->batch,
                       train_config->epochs, train_config->seed);
  }
  out += "},\"centers\":{\"c\":";
  out += serialize::vector_json(model.center());
  out += ",\"c_L\":";
  out += serialize::vector_json(model.local_center());
  out += "},\"params\":{";
  const auto params = model.params().params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += '"' + params[i].name + "\":" + serialize::matrix_json(params[i].value);
  }
  out += "}}\n";
  return out;
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid checkpoint JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "oc4seq-ckpt") throw DataError("not an oc4seq checkpoint");
    if (j.value("version", 0) != 1) throw DataError("unsupported checkpoint version");
    const auto& jc = j.at("config");
    ModelConfig cfg;
    cfg.vocab_size = jc.at("vocab_size").get<std::size_t>();
    cfg.embed_dim = jc.at("embed_dim").get<std::size_t>();
    cfg.hidden = jc.at("hidden").get<std::size_t>();
    cfg.layers = jc.at("layers").get<std::size_t>();
    cfg.window = jc.at("window").get<std::size_t>();
    cfg.alpha = jc.at("alpha").get<double>();
    cfg.lambda = jc.at("lambda").get<double>();
    cfg.aggregation = parse_aggregation(jc.at("aggregation").get<std::string>());

    Checkpoint ckpt{OC4SeqModel(cfg), std::nullopt};
    if (jc.contains("train")) {
      const auto& jt = jc.at("train");
      TrainConfig t;
      t.lr = jt.at("lr").get<double>();
      t.batch = jt.at("batch").get<std::size_t>();
      t.epochs = jt.at("epochs").get<std::size_t>();
      t.seed = jt.at("seed").get<std::uint64_t>();
      t.embed_dim = cfg.embed_dim;
      t.hidden = cfg.hidden;
      t.layers = cfg.layers;
      t.window = cfg.window;
      t.alpha = cfg.alpha;
      t.lambda = cfg.lambda;
      t.aggregation = cfg.aggregation;
      ckpt.train_config = t;
    }

    auto& store = ckpt.model.params();
    const auto& jp = j.at("params");
    if (jp.size() != store.size()) throw DataError("checkpoint parameter count does not match the config");
    for (auto& p : store.params()) {
      if (!jp.contains(p.name)) throw DataError("checkpoint is missing parameter '" + p.name + "'");
      nn::Matrix m = serialize::matrix_from_json(jp.at(p.name));
      if (m.rows() != p.value.rows() || m.cols() != p.value.cols()) {
        throw DataError("parameter '" + p.name + "' has the wrong shape");
      }
      p.value = std::move(m);
    }
    const auto& centers = j.at("centers");
    ckpt.model.set_centers(serialize::vector_from_json(centers.at("c")),
                           serialize::vector_from_json(centers.at("c_L")));
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const OC4SeqModel& model,
                     const std::optional<TrainConfig>& train_config) {
  io::write_atomic(path, checkpoint_json(model, train_config));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(io::read_file(path));
}

}  // namespace oc4seq
