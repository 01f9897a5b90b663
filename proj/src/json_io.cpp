#include "fgc/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fgc {

std::string mono_str(const Mono& m) {
  if (m.empty()) return "1";
  std::string s;
  for (auto& [g, e] : m) {
    if (!s.empty()) s += '*';
    s += gen_name(g);
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s;
}

Mono mono_parse(const std::string& s) {
  if (s == "1") return {};
  Mono m;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    if (tok.empty()) usage_error("mono_parse: empty factor in '" + s + "'");
    size_t caret = tok.find('^');
    std::string name = tok.substr(0, caret);
    int e = 1;
    if (caret != std::string::npos) {
      std::string digits = tok.substr(caret + 1);
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos)
        usage_error("mono_parse: malformed exponent in '" + tok + "'");
      e = std::stoi(digits);
      if (e < 1) usage_error("mono_parse: exponent must be >= 1");
    }
    m.push_back({gen_id(name), e});
  }
  std::sort(m.begin(), m.end());
  for (size_t i = 1; i < m.size(); ++i)
    if (m[i].first == m[i - 1].first)
      usage_error("mono_parse: repeated generator in '" + s + "'");
  return m;
}

Json rat_json(const Rat& r) { return Json(rat_str(r)); }

Rat rat_from_json(const Json& j) {
  if (!j.is_string()) usage_error("rat_from_json: expected a string");
  return rat_parse(j.get<std::string>());
}

Json poly_json(const GradedPoly& p) {
  Json j = Json::object();
  for (auto& [m, c] : p.terms()) j[mono_str(m)] = rat_str(c);
  return j;
}

GradedPoly poly_from_json(const Json& j) {
  if (!j.is_object()) usage_error("poly_from_json: expected an object");
  GradedPoly p;
  for (auto& [k, v] : j.items())
    p.add_term(mono_parse(k), rat_from_json(v));
  return p;
}

Json series_json(const TruncSeries& f) {
  Json terms = Json::array();
  for (auto& [k, c] : f.terms())
    terms.push_back(Json::array({k.first, k.second, poly_json(c)}));
  return Json{{"nvars", f.nvars()}, {"trunc", f.trunc()}, {"terms", terms}};
}

TruncSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nvars") || !j.contains("trunc") ||
      !j.contains("terms"))
    usage_error("series_from_json: expected {nvars, trunc, terms}");
  TruncSeries f(j["nvars"].get<int>(), j["trunc"].get<int>());
  for (auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 3)
      usage_error("series_from_json: malformed term");
    f.set(t[0].get<int>(), t[1].get<int>(), poly_from_json(t[2]));
  }
  return f;
}

Json dc_json(const DividedCongruence& dc) {
  Json comps = Json::array();
  for (auto& [w, form] : dc.components)
    comps.push_back(Json{{"weight", w}, {"form", poly_json(form)}});
  return Json{{"components", comps}, {"qprec", dc.qprec}};
}

DividedCongruence dc_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("components") || !j.contains("qprec"))
    usage_error("dc_from_json: expected {components, qprec}");
  DividedCongruence dc;
  dc.qprec = j["qprec"].get<int>();
  for (auto& c : j["components"]) {
    if (!c.is_object() || !c.contains("weight") || !c.contains("form"))
      usage_error("dc_from_json: component needs {weight, form}");
    dc_add_component(dc, c["weight"].get<int>(),
                     poly_from_json(c["form"]));
  }
  return dc;
}

std::string dump_stable(const Json& j) { return j.dump(2) + "\n"; }

std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string resolve_cache_root(const std::string& cli_override) {
  if (!cli_override.empty()) return cli_override;
  const char* env = std::getenv("FGC_CACHE_DIR");
  return env ? env : "";
}

namespace {

bool read_entry(const std::filesystem::path& file, const std::string& kind,
                const std::string& key, std::string* payload) {
  std::ifstream in(file);
  if (!in) return false;
  Json j;
  try {
    in >> j;
  } catch (...) {
    return false;
  }
  if (!j.is_object() || !j.contains("kind") || !j.contains("key") ||
      !j.contains("payload"))
    return false;
  if (j["kind"] != kind || j["key"] != key) return false;
  if (!j["payload"].is_string()) return false;
  *payload = j["payload"].get<std::string>();
  return true;
}

void write_entry(const std::filesystem::path& file, const std::string& kind,
                 const std::string& key, const std::string& payload) {
  Json j{{"kind", kind}, {"key", key}, {"payload", payload}};
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;  // read-only cache: stay in compute-only mode
    out << dump_stable(j);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace

std::string cache_get_or_compute(const std::string& root,
                                 const std::string& kind,
                                 const std::string& key,
                                 const std::function<std::string()>& compute,
                                 CacheStats* stats) {
  CacheStats local;
  CacheStats& st = stats ? *stats : local;
  if (root.empty()) {
    ++st.misses;
    return compute();
  }
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  std::filesystem::path file =
      std::filesystem::path(root) /
      (kind + "-" + fnv1a_hex(kind + "\n" + key) + ".json");
  std::string payload;
  if (std::filesystem::exists(file, ec) &&
      read_entry(file, kind, key, &payload)) {
    if (std::getenv("FGC_CACHE_PARANOID")) {
      std::string fresh = compute();
      if (fresh != payload) {
        std::cerr << "fgc: cache entry " << file.filename().string()
                  << " disagrees with recomputation; repairing\n";
        write_entry(file, kind, key, fresh);
        ++st.repaired;
        return fresh;
      }
    }
    ++st.hits;
    return payload;
  }
  if (std::filesystem::exists(file, ec)) {
    std::cerr << "fgc: corrupt cache entry " << file.filename().string()
              << "; recomputing\n";
    ++st.repaired;
  } else {
    ++st.misses;
  }
  payload = compute();
  write_entry(file, kind, key, payload);
  return payload;
}

}  // namespace fgc
