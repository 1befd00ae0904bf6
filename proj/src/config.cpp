#include "beliefsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "beliefsim/dynamics.hpp"

namespace beliefsim {

// Defined in the generated presets_data.cpp.
const std::map<std::string, std::string>& bundled_presets();

namespace {

using nlohmann::json;

/// Reads fields from one JSON object, remembering which keys were used so
/// that leftovers can be reported as unknown.
class FieldReader {
 public:
  FieldReader(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : trimmed(), "expected a mapping");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    used_.insert(key);
    if (!object_.contains(key)) return;
    const json& v = object_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(name(key), "expected true or false");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (v.is_number_integer()) {
          out = v.get<T>();
        } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
          out = static_cast<T>(v.get<double>());
        } else {
          throw ConfigError(name(key), "expected an integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(name(key), "expected a number");
        out = v.get<T>();
      } else {
        if (!v.is_string()) throw ConfigError(name(key), "expected a string");
        out = v.get<T>();
      }
    } catch (const json::exception&) {
      throw ConfigError(name(key), "value out of range");
    }
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (!object_.contains(key) || object_.at(key).is_null()) {
      used_.insert(key);
      return;
    }
    T value{};
    read(key, value);
    out = value;
  }

  const json* child(const std::string& key) {
    used_.insert(key);
    return object_.contains(key) ? &object_.at(key) : nullptr;
  }

  void reject_unknown() const {
    for (const auto& [key, _] : object_.items()) {
      if (!used_.count(key)) throw ConfigError(name(key), "unknown key");
    }
  }

  std::string name(const std::string& key) const { return prefix_ + key; }

 private:
  std::string trimmed() const { return prefix_.substr(0, prefix_.size() - 1); }

  const json& object_;
  std::string prefix_;
  std::set<std::string> used_;
};

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return out;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  if (text == "~" || text == "null") return nullptr;
  {
    std::size_t pos = 0;
    try {
      const long long i = std::stoll(text, &pos);
      if (pos == text.size()) return i;
    } catch (const std::exception&) {
    }
    try {
      const double d = std::stod(text, &pos);
      if (pos == text.size()) return d;
    } catch (const std::exception&) {
    }
  }
  return text;
}

std::string format_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  world.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be > 0");
  if (steps < 1) throw ConfigError("steps", "must be >= 1");
  if (sample_every < 1) throw ConfigError("sample_every", "must be >= 1");
  if (repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
}

WorldConfig ExperimentConfig::effective_world() const {
  WorldConfig w = world;
  if (sqrt_dim_scaling) {
    for (auto& p : w.populations) p.sih = effective_sih(p.sih, w.dimensions);
  }
  return w;
}

json to_json(const HerdingPolicy& h) {
  json out = {{"mode", to_string(h.mode)},
              {"amplified_weight", h.amplified_weight},
              {"target_population", h.target_population},
              {"opposing_source", h.opposing_source}};
  if (h.amplified_sih) out["amplified_sih"] = *h.amplified_sih;
  if (h.fixed_leader_id) out["fixed_leader_id"] = *h.fixed_leader_id;
  return out;
}

HerdingPolicy herding_from_json(const json& j) {
  HerdingPolicy h;
  FieldReader r(j, "herding.");
  std::string mode = to_string(h.mode);
  r.read("mode", mode);
  try {
    h.mode = parse_herding_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("herding.mode", e.what());
  }
  r.read("amplified_weight", h.amplified_weight);
  r.read("amplified_sih", h.amplified_sih);
  r.read("target_population", h.target_population);
  r.read("opposing_source", h.opposing_source);
  r.read("fixed_leader_id", h.fixed_leader_id);
  r.reject_unknown();
  return h;
}

json to_json(const ExperimentConfig& c) {
  json pops = json::array();
  for (const auto& p : c.world.populations) {
    pops.push_back({{"count", p.count},
                    {"sih", p.sih},
                    {"speed_min", p.speed_min},
                    {"speed_max", p.speed_max},
                    {"turn_rate", p.turn_rate},
                    {"sees_other", p.sees_other}});
  }
  // threads is deliberately absent: it never changes results.
  return {{"name", c.name},
          {"dimensions", c.world.dimensions},
          {"extent", c.world.extent},
          {"border", to_string(c.world.border)},
          {"init_half_range", c.world.init_half_range},
          {"cell_size", c.world.cell_size},
          {"speed_adaptation", c.world.speed_adaptation},
          {"populations", pops},
          {"herding", to_json(c.world.herding)},
          {"dt", c.dt},
          {"steps", c.steps},
          {"sample_every", c.sample_every},
          {"repetitions", c.repetitions},
          {"seed", c.seed},
          {"sqrt_dim_scaling", c.sqrt_dim_scaling}};
}

ExperimentConfig from_json(const json& j) {
  if (j.is_null()) throw ConfigError("dimensions, populations", "missing required fields: dimensions, populations");
  FieldReader r(j, "");
  if (r.has("dimensions") && j.at("dimensions").is_number()) {
    const double d = j.at("dimensions").get<double>();
    if (d < kMinDimensions || d > kMaxDimensions) throw ConfigError("dimensions", "dimensions out of range [2,10]");
  }
  std::vector<std::string> missing;
  for (const char* key : {"dimensions", "populations"})
    if (!r.has(key)) missing.emplace_back(key);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError(list, "missing required fields: " + list);
  }

  ExperimentConfig c;
  r.read("name", c.name);
  r.read("dimensions", c.world.dimensions);
  if (c.world.dimensions < kMinDimensions || c.world.dimensions > kMaxDimensions)
    throw ConfigError("dimensions", "dimensions out of range [2,10]");
  r.read("extent", c.world.extent);
  std::string border = to_string(c.world.border);
  r.read("border", border);
  try {
    c.world.border = parse_border(border);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("border", e.what());
  }
  r.read("init_half_range", c.world.init_half_range);
  r.read("cell_size", c.world.cell_size);
  r.read("speed_adaptation", c.world.speed_adaptation);
  r.read("threads", c.world.threads);

  const json* pops = r.child("populations");
  if (!pops->is_array() || pops->empty()) throw ConfigError("populations", "expected a non-empty list");
  for (std::size_t i = 0; i < pops->size(); ++i) {
    PopulationConfig p;
    FieldReader pr(pops->at(i), "populations[" + std::to_string(i) + "].");
    pr.read("count", p.count);
    pr.read("sih", p.sih);
    pr.read("speed_min", p.speed_min);
    pr.read("speed_max", p.speed_max);
    pr.read("turn_rate", p.turn_rate);
    pr.read("sees_other", p.sees_other);
    pr.reject_unknown();
    c.world.populations.push_back(p);
  }
  if (const json* h = r.child("herding")) c.world.herding = herding_from_json(*h);

  r.read("dt", c.dt);
  r.read("steps", c.steps);
  r.read("sample_every", c.sample_every);
  r.read("repetitions", c.repetitions);
  r.read("seed", c.seed);
  r.read("sqrt_dim_scaling", c.sqrt_dim_scaling);
  r.reject_unknown();
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", std::string("YAML parse error: ") + e.what());
  }
  return from_json(yaml_to_json(root));
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : bundled_presets()) names.push_back(name);
  return names;
}

const std::string& preset_text(const std::string& name) { return bundled_presets().at(name); }

ExperimentConfig load_preset(const std::string& name) {
  const auto& presets = bundled_presets();
  const auto it = presets.find(name);
  if (it == presets.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return parse_config(it->second);
}

ExperimentConfig load_config(const std::string& path_or_preset) {
  const std::filesystem::path path(path_or_preset);
  if (!std::filesystem::exists(path)) {
    if (bundled_presets().count(path_or_preset)) return load_preset(path_or_preset);
    throw std::runtime_error("config file not found: " + path_or_preset);
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path_or_preset);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return format_hex(h);
}

}  // namespace beliefsim
