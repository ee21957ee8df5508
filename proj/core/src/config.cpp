#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>
#include "lte/harness.hpp"

namespace lte {

namespace {

using nlohmann::json;

template <class T>
std::vector<T> one_or_many(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

void apply_json_config(ExperimentConfig& cfg, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be a JSON object");

  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "model") {
        cfg.model = v.get<std::string>();
      } else if (key == "gamma") {
        cfg.gamma = v.get<double>();
      } else if (key == "schemes" || key == "scheme") {
        cfg.schemes = one_or_many<std::string>(v);
      } else if (key == "lambdas" || key == "lambda") {
        cfg.lambdas = one_or_many<double>(v);
      } else if (key == "T") {
        cfg.T = v.get<double>();
      } else if (key == "dx") {
        cfg.dx = v.get<double>();
      } else if (key == "dt") {
        cfg.dt = v.get<double>();
      } else if (key == "levels") {
        cfg.levels = one_or_many<int>(v);
      } else if (key == "reference_level") {
        cfg.reference_level = v.get<int>();
      } else if (key == "samples") {
        cfg.samples = v.get<std::uint64_t>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "test_functions" || key == "test_function") {
        cfg.test_functions = one_or_many<std::string>(v);
      } else if (key == "output_path") {
        cfg.output_path = v.get<std::string>();
      } else if (key == "threads") {
        cfg.threads = v.get<unsigned>();
      } else if (key == "nu") {
        cfg.nu = v.get<double>();
      } else if (key == "x0") {
        cfg.x0 = v.get<double>();
      } else if (key == "check_dt") {
        cfg.check_dt = v.get<double>();
      } else if (key == "oracle_step") {
        cfg.oracle_step = v.get<double>();
      } else if (key == "check_samples") {
        cfg.check_samples = v.get<std::uint64_t>();
      } else if (key == "sample_id") {
        cfg.sample_id = v.get<std::uint64_t>();
      } else if (key == "record_timing") {
        cfg.record_timing = v.get<bool>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + e.what());
    }
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg;
  apply_json_config(cfg, buf.str());
  return cfg;
}

}  // namespace lte
