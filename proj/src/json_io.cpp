#include "droca/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "droca/error.hpp"
#include "json.hpp"

namespace droca {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> string_list(const ordered_json& j, const char* field) {
  if (!j.contains(field)) throw ParseError(field, "missing");
  const auto& arr = j.at(field);
  if (!arr.is_array()) throw ParseError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw ParseError(std::string(field) + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::map<DrocaDraft::Key, DrocaDraft::Entry> delta_map(const ordered_json& j, const char* field,
                                                     const std::set<std::string>& states,
                                                     const std::set<std::string>& letters) {
  if (!j.contains(field)) throw ParseError(field, "missing");
  const auto& obj = j.at(field);
  if (!obj.is_object()) throw ParseError(field, "expected an object");
  std::map<DrocaDraft::Key, DrocaDraft::Entry> out;
  for (const auto& [key, val] : obj.items()) {
    const std::string where = std::string(field) + "[\"" + key + "\"]";
    auto comma = key.find(',');
    if (comma == std::string::npos) throw ParseError(where, "key must have the form \"state,letter\"");
    std::string state = key.substr(0, comma);
    std::string letter = key.substr(comma + 1);
    if (!states.count(state)) throw ParseError(where, "unknown state '" + state + "'");
    if (!letters.count(letter)) throw ParseError(where, "unknown letter '" + letter + "'");
    if (!val.is_array() || val.size() != 2 || !val[0].is_string() || !val[1].is_number_integer()) {
      throw ParseError(where, "value must be [target, action]");
    }
    std::string target = val[0].get<std::string>();
    if (!states.count(target)) throw ParseError(where, "unknown target state '" + target + "'");
    int action = val[1].get<int>();
    const bool zero_mode = std::string(field) == "delta0";
    if (zero_mode && action == -1) throw ParseError(where, "decrement at zero");
    if (action < -1 || action > 1) throw ParseError(where, "action must be -1, 0 or 1");
    if (!out.emplace(DrocaDraft::Key{state, letter}, DrocaDraft::Entry{target, action}).second) {
      throw ParseError(where, "duplicate entry");
    }
  }
  return out;
}

}  // namespace

DrocaDraft parse_draft(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  if (j.contains("type")) {
    const auto& t = j.at("type");
    if (!t.is_string() || (t != "droca" && t != "voca")) throw ParseError("type", "must be \"droca\" or \"voca\"");
  }
  DrocaDraft d;
  d.alphabet = string_list(j, "alphabet");
  d.states = string_list(j, "states");
  if (d.alphabet.empty()) throw ParseError("alphabet", "must not be empty");
  if (d.states.empty()) throw ParseError("states", "must not be empty");
  std::set<std::string> letters(d.alphabet.begin(), d.alphabet.end());
  std::set<std::string> states(d.states.begin(), d.states.end());
  if (letters.size() != d.alphabet.size()) throw ParseError("alphabet", "duplicate letter");
  if (states.size() != d.states.size()) throw ParseError("states", "duplicate state");
  for (const auto& l : d.alphabet) {
    if (l.empty() || l.find(',') != std::string::npos) throw ParseError("alphabet", "letter '" + l + "' is empty or contains ','");
  }
  for (const auto& s : d.states) {
    if (s.empty() || s.find(',') != std::string::npos) throw ParseError("states", "state '" + s + "' is empty or contains ','");
  }
  if (!j.contains("initial") || !j.at("initial").is_string()) throw ParseError("initial", "missing or not a string");
  d.initial = j.at("initial").get<std::string>();
  if (!states.count(d.initial)) throw ParseError("initial", "unknown state '" + d.initial + "'");
  d.finals = string_list(j, "finals");
  for (const auto& f : d.finals) {
    if (!states.count(f)) throw ParseError("finals", "unknown state '" + f + "'");
  }
  d.delta0 = delta_map(j, "delta0", states, letters);
  d.delta1 = delta_map(j, "delta1", states, letters);
  return d;
}

Droca load(std::string_view text, const LoadOptions& options) {
  DrocaDraft d = parse_draft(text);
  if (options.complete_with_sink) d = complete_with_sink(std::move(d));
  for (const char* field : {"delta0", "delta1"}) {
    const auto& m = std::string(field) == "delta0" ? d.delta0 : d.delta1;
    for (const auto& q : d.states) {
      for (const auto& a : d.alphabet) {
        if (!m.count({q, a})) throw ParseError(field, "incomplete transition table: missing \"" + q + "," + a + "\"");
      }
    }
  }
  Droca a = build_droca(d);
  if (ordered_json::parse(text).value("type", "droca") == "voca" && !is_voca(a)) {
    throw ParseError("type", "declared voca but counter actions are not determined by (letter, counter sign)");
  }
  return a;
}

Droca load_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load(buf.str(), options);
}

std::string store(const Droca& a) {
  ordered_json j;
  j["type"] = is_voca(a) ? "voca" : "droca";
  j["alphabet"] = a.alphabet().letters();
  j["states"] = a.state_names();
  j["initial"] = a.state_name(a.initial());
  std::vector<std::string> finals;
  for (StateId q = 0; q < a.num_states(); ++q) {
    if (a.is_final(q)) finals.push_back(a.state_name(q));
  }
  j["finals"] = finals;
  for (int sign = 0; sign < 2; ++sign) {
    ordered_json m = ordered_json::object();
    for (StateId q = 0; q < a.num_states(); ++q) {
      for (Letter l = 0; l < a.alphabet().size(); ++l) {
        const auto& t = a.delta(sign, q, l);
        m[a.state_name(q) + "," + a.alphabet().name(l)] = ordered_json::array({a.state_name(t.target), t.action});
      }
    }
    j[sign == 0 ? "delta0" : "delta1"] = std::move(m);
  }
  return j.dump(2) + "\n";
}

void store_file(const Droca& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << store(a);
}

}  // namespace droca
