#pragma once

// Run configuration shared by the command-line driver: a JSON document with
// global settings and per-command parameters. Parsing normalizes values into
// a canonical form, so from_json(to_json(c)) == c for every valid c.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "psg/errors.hpp"

namespace psg::cli {

using json = nlohmann::json;

/// Parses integer literals: "1000", "10^6", "2^20", "1e6", "2.5e3",
/// optionally followed by "+k" or "-k" ("10^5+1").
inline std::uint64_t parse_count(std::string_view text) {
  const std::string orig(text);
  auto fail = [&] { return ConfigError("cannot read '" + orig + "' as a non-negative integer"); };
  auto digits = [&](std::string_view s) {
    if (s.empty() || s.size() > 19) throw fail();
    std::uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw fail();
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  };
  auto mul = [&](std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) throw fail();
    return a * b;
  };
  auto ipow = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, b);
    return r;
  };

  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  std::int64_t offset = 0;
  if (const auto pos = s.find_first_of("+-", 1); pos != std::string::npos && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
    const std::uint64_t off = digits(std::string_view(s).substr(pos + 1));
    offset = s[pos] == '+' ? static_cast<std::int64_t>(off) : -static_cast<std::int64_t>(off);
    s.resize(pos);
  }
  std::uint64_t base = 0;
  if (const auto caret = s.find('^'); caret != std::string::npos) {
    base = ipow(digits(std::string_view(s).substr(0, caret)), digits(std::string_view(s).substr(caret + 1)));
  } else if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    std::string mant = s.substr(0, e);
    std::uint64_t exp10 = digits(std::string_view(s).substr(e + 1));
    std::uint64_t frac_digits = 0;
    if (const auto dot = mant.find('.'); dot != std::string::npos) {
      frac_digits = mant.size() - dot - 1;
      mant.erase(dot, 1);
    }
    while (frac_digits > 0 && !mant.empty() && mant.back() == '0') {
      mant.pop_back();
      --frac_digits;
    }
    if (frac_digits > exp10) throw fail();
    base = mul(digits(mant), ipow(10, exp10 - frac_digits));
  } else {
    base = digits(s);
  }
  if (offset < 0 && static_cast<std::uint64_t>(-offset) > base) throw fail();
  return offset < 0 ? base - static_cast<std::uint64_t>(-offset) : base + static_cast<std::uint64_t>(offset);
}

enum class ParamKind { kUInt, kUIntList, kReal, kString, kStringList, kBool };

struct ParamSpec {
  ParamKind kind;
  bool required = false;
  std::optional<json> fallback;  // canonical default when absent
};

using Schema = std::map<std::string, ParamSpec>;

inline const std::map<std::string, Schema>& command_schemas() {
  static const std::map<std::string, Schema> schemas = {
      {"ps-count", {{"x", {ParamKind::kUIntList, true, {}}}, {"profile", {ParamKind::kString, true, {}}}}},
      {"ternary",
       {{"n", {ParamKind::kUIntList, true, {}}},
        {"mode", {ParamKind::kString, false, json("unweighted")}},
        {"profiles", {ParamKind::kStringList, false, json::array()}}}},
      {"singular", {{"n", {ParamKind::kUIntList, true, {}}}, {"P", {ParamKind::kUInt, false, json(100000)}}}},
      {"admissible", {{"profiles", {ParamKind::kStringList, true, {}}}}},
      {"expsum-scan", {{"spec", {ParamKind::kString, true, {}}}, {"alphas", {ParamKind::kUInt, false, json(64)}}}},
      {"hb-check",
       {{"limit", {ParamKind::kUInt, true, {}}},
        {"nu", {ParamKind::kUInt, false, json(4)}},
        {"z", {ParamKind::kReal, false, json(20.0)}}}},
      {"psi-scan",
       {{"N", {ParamKind::kUIntList, true, {}}},
        {"profile", {ParamKind::kString, true, {}}},
        {"delta", {ParamKind::kReal, false, {}}},
        {"alphas", {ParamKind::kUInt, false, json(128)}},
        {"mode", {ParamKind::kString, false, json("standard")}}}},
  };
  return schemas;
}

namespace detail {

inline std::uint64_t to_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError("'" + key + "' must be non-negative");
    return static_cast<std::uint64_t>(i);
  }
  if (v.is_string()) return parse_count(v.get<std::string>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d < 0x1p64 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
      return static_cast<std::uint64_t>(d);
    }
  }
  throw ConfigError("'" + key + "' must be a non-negative integer");
}

inline json canonical_param(const std::string& key, const ParamSpec& spec, const json& v) {
  switch (spec.kind) {
    case ParamKind::kUInt:
      return to_uint(v, key);
    case ParamKind::kUIntList: {
      json out = json::array();
      if (v.is_array()) {
        if (v.empty()) throw ConfigError("'" + key + "' must not be empty");
        for (const auto& e : v) out.push_back(to_uint(e, key));
      } else if (v.is_string() && v.get<std::string>().find(',') != std::string::npos) {
        std::string_view rest = v.get_ref<const std::string&>();
        while (true) {
          const auto comma = rest.find(',');
          out.push_back(parse_count(rest.substr(0, comma)));
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
        }
      } else {
        out.push_back(to_uint(v, key));
      }
      return out;
    }
    case ParamKind::kReal:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) {
        try {
          std::size_t used = 0;
          const double d = std::stod(v.get<std::string>(), &used);
          if (used == v.get<std::string>().size()) return d;
        } catch (const std::exception&) {
        }
      }
      throw ConfigError("'" + key + "' must be a real number");
    case ParamKind::kString:
      if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
      return v;
    case ParamKind::kStringList: {
      json out = json::array();
      if (v.is_string()) {
        out.push_back(v);
      } else if (v.is_array()) {
        for (const auto& e : v) {
          if (!e.is_string()) throw ConfigError("'" + key + "' must hold strings");
          out.push_back(e);
        }
      } else {
        throw ConfigError("'" + key + "' must be a string or a list of strings");
      }
      return out;
    }
    case ParamKind::kBool:
      if (!v.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
      return v;
  }
  throw ConfigError("unhandled parameter kind");
}

}  // namespace detail

struct RunConfig {
  std::string command;
  std::optional<std::uint64_t> sieve_limit;  // derived from the command when absent
  unsigned workers = 0;                      // 0: PSG_WORKERS or hardware concurrency
  std::string out = "psg-out";
  std::uint64_t seed = 20240517;
  std::string sieve_cache;
  bool timings = false;
  json params = json::object();  // canonical per-command parameters

  static RunConfig from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    static const char* const kKeys[] = {"command", "sieve_limit", "workers", "out",
                                        "seed",    "sieve_cache", "timings", "params"};
    for (const auto& [key, _] : j.items()) {
      if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    RunConfig c;
    if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("config needs a 'command' string");
    c.command = j["command"].get<std::string>();
    const auto& schemas = command_schemas();
    const auto it = schemas.find(c.command);
    if (it == schemas.end()) throw ConfigError("unknown command '" + c.command + "'");

    if (j.contains("sieve_limit") && !j["sieve_limit"].is_null()) c.sieve_limit = detail::to_uint(j["sieve_limit"], "sieve_limit");
    if (j.contains("workers")) {
      const auto w = detail::to_uint(j["workers"], "workers");
      if (w > 4096) throw ConfigError("'workers' is unreasonably large");
      c.workers = static_cast<unsigned>(w);
    }
    if (j.contains("out")) {
      if (!j["out"].is_string() || j["out"].get<std::string>().empty()) throw ConfigError("'out' must be a path");
      c.out = j["out"].get<std::string>();
    }
    if (j.contains("seed")) c.seed = detail::to_uint(j["seed"], "seed");
    if (j.contains("sieve_cache")) {
      if (!j["sieve_cache"].is_string()) throw ConfigError("'sieve_cache' must be a path");
      c.sieve_cache = j["sieve_cache"].get<std::string>();
    }
    if (j.contains("timings")) {
      if (!j["timings"].is_boolean()) throw ConfigError("'timings' must be true or false");
      c.timings = j["timings"].get<bool>();
    }

    const json params = j.contains("params") ? j["params"] : json::object();
    if (!params.is_object()) throw ConfigError("'params' must be an object");
    const Schema& schema = it->second;
    for (const auto& [key, _] : params.items()) {
      if (!schema.count(key)) throw ConfigError("unknown parameter '" + key + "' for " + c.command);
    }
    for (const auto& [key, spec] : schema) {
      if (params.contains(key) && !params[key].is_null()) {
        c.params[key] = detail::canonical_param(key, spec, params[key]);
      } else if (spec.required) {
        throw ConfigError("missing parameter '" + key + "' for " + c.command);
      } else if (spec.fallback) {
        c.params[key] = *spec.fallback;
      }
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    return from_json(j);
  }

  json to_json() const {
    json j;
    j["command"] = command;
    if (sieve_limit) j["sieve_limit"] = *sieve_limit;
    j["workers"] = workers;
    j["out"] = out;
    j["seed"] = seed;
    j["sieve_cache"] = sieve_cache;
    j["timings"] = timings;
    j["params"] = params;
    return j;
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) { return a.to_json() == b.to_json(); }
};

/// Overlays `flags` on `base` key by key (params merged one level deep).
inline json merge_config(json base, const json& flags) {
  if (!base.is_object()) base = json::object();
  for (const auto& [key, value] : flags.items()) {
    if (key == "params" && value.is_object()) {
      if (!base.contains("params") || !base["params"].is_object()) base["params"] = json::object();
      for (const auto& [pk, pv] : value.items()) base["params"][pk] = pv;
    } else {
      base[key] = value;
    }
  }
  return base;
}

}  // namespace psg::cli
