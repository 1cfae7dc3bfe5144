#include "goldman/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace goldman {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

// Shortest %g form that reads back to the same double.
std::string num(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

const char* to_string(CocycleMode m) {
  switch (m) {
    case CocycleMode::Zero: return "zero";
    case CocycleMode::Coboundary: return "coboundary";
    case CocycleMode::Solved: return "solved";
    case CocycleMode::File: return "file";
  }
  return "?";
}

CocycleMode cocycle_mode_from_string(const std::string& s) {
  if (s == "zero") return CocycleMode::Zero;
  if (s == "coboundary") return CocycleMode::Coboundary;
  if (s == "solved") return CocycleMode::Solved;
  if (s == "file") return CocycleMode::File;
  throw ConfigError("mode: expected zero, coboundary, solved or file, got '" + s + "'");
}

std::string format_window(const Window& w) {
  return num(w.x0) + "," + num(w.y0) + "," + num(w.x1) + "," + num(w.y1);
}

Window parse_window(const std::string& s) {
  const auto v = to_list("zoom", s);
  if (v.size() != 4) throw ConfigError("zoom: expected x0,y0,x1,y1");
  Window w{v[0], v[1], v[2], v[3]};
  if (!w.valid()) throw ConfigError("zoom: need x0 < x1 and y0 < y1");
  return w;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "genus") {
    genus = static_cast<int>(to_int(key, v));
  } else if (key == "mode") {
    mode = cocycle_mode_from_string(v);
  } else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "amplitude") {
    amplitude = to_double(key, v);
  } else if (key == "coboundary") {
    const auto p = to_list(key, v);
    if (p.size() != 2) throw ConfigError("coboundary: expected two numbers x,y");
    coboundary_x = p[0];
    coboundary_y = p[1];
  } else if (key == "cocycle_file") {
    cocycle_file = v;
  } else if (key == "twist_generator") {
    twist_generator = static_cast<int>(to_int(key, v));
  } else if (key == "twist") {
    if (v != "boundary") to_double(key, v);
    twist = v;
  } else if (key == "max_len") {
    max_len = static_cast<int>(to_int(key, v));
  } else if (key == "threads") {
    threads = static_cast<int>(to_int(key, v));
  } else if (key == "out") {
    out = v;
  } else if (key == "chart") {
    try {
      chart = chart_from_string(v);
    } catch (const CurveError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "zoom") {
    if (v.empty()) {
      zoom.reset();
    } else {
      zoom = parse_window(v);
    }
  } else if (key == "flags") {
    flags = static_cast<std::size_t>(to_int(key, v));
  } else if (key == "equivariance_pairs") {
    equivariance_pairs = static_cast<std::size_t>(to_int(key, v));
  } else if (key == "spectral_gate") {
    spectral_gate = to_double(key, v);
  } else if (key == "dedup_tol") {
    dedup_tol = to_double(key, v);
  } else if (key == "dead_zone") {
    dead_zone = to_double(key, v);
  } else if (key == "pure_above") {
    pure_above = to_double(key, v);
  } else if (key == "not_pure_below") {
    not_pure_below = to_double(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (genus != 2) throw ConfigError("only genus 2 is supported");
  if (max_len < 1 || max_len > kMaxLenCap) {
    throw ConfigError("max_len must be in [1, " + std::to_string(kMaxLenCap) + "]");
  }
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (amplitude < 0) throw ConfigError("amplitude must be non-negative");
  if (mode == CocycleMode::File && cocycle_file.empty()) {
    throw ConfigError("mode=file needs cocycle_file");
  }
  if (twist_generator < 0 || twist_generator >= 2 * genus) {
    throw ConfigError("twist_generator out of range");
  }
  if (!(spectral_gate > 0) || !(dedup_tol > 0) || !(dead_zone > 0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (!(not_pure_below > 0) || !(pure_above >= not_pure_below)) {
    throw ConfigError("need 0 < not_pure_below <= pure_above");
  }
}

std::vector<std::string> RunConfig::echo() const {
  return {
      "genus = " + std::to_string(genus),
      std::string("mode = ") + to_string(mode),
      "seed = " + std::to_string(seed),
      "amplitude = " + num(amplitude),
      "coboundary = " + num(coboundary_x) + "," + num(coboundary_y),
      "cocycle_file = " + cocycle_file,
      "twist_generator = " + std::to_string(twist_generator),
      "twist = " + twist,
      "max_len = " + std::to_string(max_len),
      std::string("chart = ") + to_string(chart),
      "zoom = " + (zoom ? format_window(*zoom) : std::string()),
      "flags = " + std::to_string(flags),
      "equivariance_pairs = " + std::to_string(equivariance_pairs),
      "spectral_gate = " + num(spectral_gate),
      "dedup_tol = " + num(dedup_tol),
      "dead_zone = " + num(dead_zone),
      "pure_above = " + num(pure_above),
      "not_pure_below = " + num(not_pure_below),
  };
}

std::string RunConfig::echo_text() const {
  std::string out;
  for (const auto& line : echo()) out += line + "\n";
  return out;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig parse_config_json(const std::string& text, RunConfig base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config JSON must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& v = it.value();
    std::string text_value;
    if (v.is_string()) {
      text_value = v.get<std::string>();
    } else if (v.is_number_integer()) {
      text_value = std::to_string(v.get<long long>());
    } else if (v.is_number()) {
      text_value = num(v.get<double>());
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(it.key() + ": array entries must be numbers");
        if (i) text_value += ",";
        text_value += num(v[i].get<double>());
      }
    } else if (v.is_null()) {
      text_value = "";
    } else {
      throw ConfigError(it.key() + ": unsupported JSON value");
    }
    base.set(it.key(), text_value);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_config_json(text, base);
  return parse_config_text(text, base);
}

}  // namespace goldman
