#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qmse/errors.hpp"
#include "qmse/experiment.hpp"

namespace qmse {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty())
    throw ConfigError(key + ": cannot parse '" + value + "' as a number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

std::vector<std::uint64_t> parse_shot_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(value);
  for (std::string item; std::getline(ss, item, ',');)
    out.push_back(parse_number<std::uint64_t>(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "state")
           c.mode = Mode::state;
         else if (v == "unitary")
           c.mode = Mode::unitary;
         else
           throw ConfigError(k + ": expected 'state' or 'unitary', got '" + v + "'");
       }},
      {"d", [](auto& c, auto& k, auto& v) { c.d = parse_number<int>(k, v); }},
      {"shots", [](auto& c, auto& k, auto& v) { c.shots = parse_shot_list(k, v); }},
      {"k_max", [](auto& c, auto& k, auto& v) { c.k_max = parse_number<std::uint64_t>(k, v); }},
      {"targets", [](auto& c, auto& k, auto& v) { c.targets = parse_number<std::uint64_t>(k, v); }},
      {"runs", [](auto& c, auto& k, auto& v) { c.runs = parse_number<std::uint64_t>(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"gain.a", [](auto& c, auto& k, auto& v) { c.gains.a = parse_number<double>(k, v); }},
      {"gain.A", [](auto& c, auto& k, auto& v) { c.gains.A = parse_number<double>(k, v); }},
      {"gain.s", [](auto& c, auto& k, auto& v) { c.gains.s = parse_number<double>(k, v); }},
      {"gain.b", [](auto& c, auto& k, auto& v) { c.gains.b = parse_number<double>(k, v); }},
      {"gain.r", [](auto& c, auto& k, auto& v) { c.gains.r = parse_number<double>(k, v); }},
      {"simplex.max_evaluations",
       [](auto& c, auto& k, auto& v) { c.simplex.max_evaluations = parse_number<std::uint64_t>(k, v); }},
      {"simplex.x_tolerance", [](auto& c, auto& k, auto& v) { c.simplex.x_tolerance = parse_number<double>(k, v); }},
      {"simplex.f_tolerance", [](auto& c, auto& k, auto& v) { c.simplex.f_tolerance = parse_number<double>(k, v); }},
      {"simplex.reflection", [](auto& c, auto& k, auto& v) { c.simplex.reflection = parse_number<double>(k, v); }},
      {"simplex.expansion", [](auto& c, auto& k, auto& v) { c.simplex.expansion = parse_number<double>(k, v); }},
      {"simplex.contraction", [](auto& c, auto& k, auto& v) { c.simplex.contraction = parse_number<double>(k, v); }},
      {"simplex.shrink", [](auto& c, auto& k, auto& v) { c.simplex.shrink = parse_number<double>(k, v); }},
      {"simplex.initial_step", [](auto& c, auto& k, auto& v) { c.simplex.initial_step = parse_number<double>(k, v); }},
      {"mle", [](auto& c, auto& k, auto& v) { c.mle_enabled = parse_bool(k, v); }},
      {"noiseless", [](auto& c, auto& k, auto& v) { c.noiseless = parse_bool(k, v); }},
      {"post",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "none")
           c.unitary.post_processing = PostProcessing::none;
         else if (v == "closest")
           c.unitary.post_processing = PostProcessing::closest_unitary;
         else if (v == "gs")
           c.unitary.post_processing = PostProcessing::gram_schmidt;
         else
           throw ConfigError(k + ": expected none, closest or gs, got '" + v + "'");
       }},
      {"re_update", [](auto& c, auto& k, auto& v) { c.unitary.re_update = parse_bool(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = parse_number<unsigned>(k, v); }},
      {"out", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output = v; }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::stringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    try {
      it->second(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

IterationWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("window: expected lo:hi, got '" + text + "'");
  IterationWindow w;
  w.lo = parse_number<std::uint64_t>("window", trim(text.substr(0, colon)));
  w.hi = parse_number<std::uint64_t>("window", trim(text.substr(colon + 1)));
  if (w.lo >= w.hi) throw ConfigError("window: lo must be smaller than hi in '" + text + "'");
  return w;
}

}  // namespace qmse
