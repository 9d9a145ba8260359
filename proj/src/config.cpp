#include "cprw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "cprw/error.hpp"

namespace cprw {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T read(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

double read_number(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return obj.at(key).get<double>();
}

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
  return read<T>(obj, key, where, T{});
}

std::int64_t read_integer(const json& obj, const char* key, const std::string& where,
                          std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9.2e18) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(where + "." + key + " must be an integer");
}

LatticeLaw parse_law(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const auto kind_name = required<std::string>(obj, "kind", where);
  LatticeLaw::Kind kind;
  try {
    kind = lattice_kind_from_string(kind_name);
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  switch (kind) {
    case LatticeLaw::Kind::rademacher:
      reject_unknown(obj, where, {"kind"});
      return LatticeLaw::rademacher();
    case LatticeLaw::Kind::simple_symmetric:
      reject_unknown(obj, where, {"kind"});
      return LatticeLaw::simple_symmetric();
    case LatticeLaw::Kind::ternary:
      reject_unknown(obj, where, {"kind", "p0"});
      return LatticeLaw::ternary(read_number(obj, "p0", where, 0.0));
    case LatticeLaw::Kind::lazy_vertical:
      reject_unknown(obj, where, {"kind", "p"});
      return LatticeLaw::lazy_vertical(read_number(obj, "p", where, 0.5));
    case LatticeLaw::Kind::pareto_tail:
      reject_unknown(obj, where, {"kind", "index", "tail_constant"});
      if (!obj.contains("index")) throw ConfigError(where + ".index is required");
      return LatticeLaw::pareto_tail(read_number(obj, "index", where, 1.0),
                                     read_number(obj, "tail_constant", where, 0.0));
  }
  throw ConfigError(where + ": unsupported law");
}

json law_to_json(const LatticeLaw& law) {
  json out{{"kind", law.name()}};
  switch (law.kind()) {
    case LatticeLaw::Kind::ternary: out["p0"] = law.zero_mass(); break;
    case LatticeLaw::Kind::lazy_vertical: out["p"] = law.zero_mass(); break;
    case LatticeLaw::Kind::pareto_tail:
      out["index"] = law.stable_index();
      out["tail_constant"] = law.tail_constant();
      break;
    default: break;
  }
  return out;
}

StableLaw parse_stable(const json& obj, const std::string& where) {
  reject_unknown(obj, where, {"index", "a1", "a2"});
  if (!obj.contains("index")) throw ConfigError(where + ".index is required");
  StableLaw law{read_number(obj, "index", where, 2.0), read_number(obj, "a1", where, 1.0),
                read_number(obj, "a2", where, 0.0)};
  law.validate();
  return law;
}

json stable_to_json(const StableLaw& law) {
  return json{{"index", law.index}, {"a1", law.a1}, {"a2", law.a2}};
}

ModelSpec parse_model(const json& obj) {
  if (!obj.is_object()) throw ConfigError("model must be an object");
  const auto type = required<std::string>(obj, "type", "model");
  if (type == "cp") {
    reject_unknown(obj, "model", {"type", "p"});
    return CpModel{read_number(obj, "p", "model", 0.5)};
  }
  if (type == "rwrs") {
    reject_unknown(obj, "model", {"type", "walk", "scenery", "alpha", "beta"});
    RwrsModel m;
    if (obj.contains("walk")) m.walk = parse_law(obj.at("walk"), "model.walk");
    if (obj.contains("scenery")) m.scenery = parse_law(obj.at("scenery"), "model.scenery");
    m.alpha = read_number(obj, "alpha", "model", m.walk.stable_index());
    m.beta = read_number(obj, "beta", "model", m.scenery.stable_index());
    return m;
  }
  if (type == "limit") {
    reject_unknown(obj, "model", {"type", "alpha_law", "beta_law", "space_mesh"});
    LimitModel m;
    if (obj.contains("alpha_law")) m.alpha_law = parse_stable(obj.at("alpha_law"), "model.alpha_law");
    if (obj.contains("beta_law")) m.beta_law = parse_stable(obj.at("beta_law"), "model.beta_law");
    m.space_mesh = read_number(obj, "space_mesh", "model", 0.0);
    return m;
  }
  throw ConfigError("model.type must be one of cp, rwrs, limit");
}

json model_to_json(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CpModel>) {
          return json{{"type", "cp"}, {"p", m.p}};
        } else if constexpr (std::is_same_v<M, RwrsModel>) {
          return json{{"type", "rwrs"},
                      {"walk", law_to_json(m.walk)},
                      {"scenery", law_to_json(m.scenery)},
                      {"alpha", m.alpha},
                      {"beta", m.beta}};
        } else {
          return json{{"type", "limit"},
                      {"alpha_law", stable_to_json(m.alpha_law)},
                      {"beta_law", stable_to_json(m.beta_law)},
                      {"space_mesh", m.space_mesh}};
        }
      },
      model);
}

std::vector<std::int64_t> parse_sizes(const json& doc) {
  if (!doc.contains("sizes")) throw ConfigError("sizes is required");
  const json& v = doc.at("sizes");
  if (!v.is_array()) throw ConfigError("sizes must be a list");
  std::vector<std::int64_t> sizes;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sizes.push_back(read_integer(json{{"n", v[i]}}, "n", "sizes[" + std::to_string(i) + "]", 0));
  }
  return sizes;
}

}  // namespace

Config parse_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"model", "sizes", "trials", "horizon", "master_seed", "outputs", "confidence",
                  "max_work", "output", "scaling"});
  Config config;
  ExperimentSpec& spec = config.spec;
  try {
    if (!doc.contains("model")) throw ConfigError("model is required");
    spec.model = parse_model(doc.at("model"));
    spec.sizes = parse_sizes(doc);
    spec.trials = read_integer(doc, "trials", "config", spec.trials);
    spec.horizon = read_integer(doc, "horizon", "config", spec.horizon);
    if (doc.contains("master_seed")) {
      const json& s = doc.at("master_seed");
      if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                     s.get<std::int64_t>() < 0)) {
        throw ConfigError("master_seed must be a non-negative integer");
      }
      spec.master_seed = s.get<std::uint64_t>();
    }
    if (doc.contains("outputs")) {
      const json& outs = doc.at("outputs");
      if (!outs.is_array()) throw ConfigError("outputs must be a list");
      for (const auto& o : outs) {
        if (!o.is_string()) throw ConfigError("outputs must be statistic names");
        spec.outputs.push_back(statistic_from_string(o.get<std::string>()));
      }
    } else {
      spec.outputs = default_statistics(spec.model);
    }
    spec.confidence = read_number(doc, "confidence", "config", spec.confidence);
    spec.max_work = read_number(doc, "max_work", "config", spec.max_work);

    if (doc.contains("output")) {
      const json& o = doc.at("output");
      reject_unknown(o, "output", {"dir", "csv", "summary"});
      config.output.dir = read<std::string>(o, "dir", "output", config.output.dir);
      config.output.csv = read<std::string>(o, "csv", "output", config.output.csv);
      config.output.summary = read<std::string>(o, "summary", "output", config.output.summary);
    }
    if (doc.contains("scaling")) {
      const json& s = doc.at("scaling");
      reject_unknown(s, "scaling", {"statistic", "points"});
      ScalingInput in;
      if (s.contains("statistic")) {
        in.statistic = statistic_from_string(required<std::string>(s, "statistic", "scaling"));
      }
      if (s.contains("points")) {
        const json& pts = s.at("points");
        if (!pts.is_array()) throw ConfigError("scaling.points must be a list");
        for (const auto& p : pts) {
          if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ConfigError("scaling.points entries must be [n, value] pairs");
          }
          in.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
      }
      config.scaling = std::move(in);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  spec.validate();
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const Config& config) {
  const ExperimentSpec& spec = config.spec;
  json outputs = json::array();
  for (Statistic s : spec.outputs) outputs.push_back(to_string(s));
  json doc{{"model", model_to_json(spec.model)},
           {"sizes", spec.sizes},
           {"trials", spec.trials},
           {"horizon", spec.horizon},
           {"master_seed", spec.master_seed},
           {"outputs", outputs},
           {"confidence", spec.confidence},
           {"max_work", spec.max_work},
           {"output",
            {{"dir", config.output.dir},
             {"csv", config.output.csv},
             {"summary", config.output.summary}}}};
  if (config.scaling) {
    json s = json::object();
    if (config.scaling->statistic) s["statistic"] = to_string(*config.scaling->statistic);
    json pts = json::array();
    for (const auto& [n, v] : config.scaling->points) pts.push_back({n, v});
    s["points"] = pts;
    doc["scaling"] = s;
  }
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    path.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) throw ConfigError("override key '" + key + "' crosses a non-object");
    node = &(*node)[path[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError("override key '" + key + "' crosses a non-object");
  (*node)[path.back()] = value;
}

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& out, const ExperimentResult& result, double confidence) {
  out << "n,statistic,mean,ci_half,trials\n";
  for (const auto& row : result.rows) {
    const auto ci = row.stats.ci_half_width(confidence);
    out << row.n << ',' << csv_field(to_string(row.statistic)) << ','
        << format_double(row.stats.mean()) << ',' << (ci ? format_double(*ci) : "") << ','
        << row.stats.count() << "\n";
  }
}

json summary_json(const Config& config, const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    const auto ci = row.stats.ci_half_width(config.spec.confidence);
    rows.push_back({{"n", row.n},
                    {"statistic", to_string(row.statistic)},
                    {"mean", row.stats.mean()},
                    {"variance", row.stats.variance()},
                    {"ci_half", ci ? json(*ci) : json(nullptr)},
                    {"trials", row.stats.count()}});
  }
  return json{{"config", to_json(config)},
              {"master_seed", config.spec.master_seed},
              {"model", model_name(config.spec.model)},
              {"results", rows}};
}

}  // namespace cprw
