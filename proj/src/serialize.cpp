#include "ifsp/serialize.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "ifsp/errors.hpp"

namespace ifsp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty())
    throw ConstructionError(context + ": empty numeric field");
  double v = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConstructionError(context + ": cannot parse number '" + t + "'");
  return v;
}

Json map_to_json(const MonotoneMap& m) {
  Json j;
  switch (m.variant()) {
    case MapVariant::theorem:
      j["variant"] = "theorem";
      j["dist"] = dist_spec_string(*m.dist());
      j["n"] = m.cells();
      j["i"] = m.index();
      return j;
    case MapVariant::affine:
      j["variant"] = "affine";
      j["a"] = m.a();
      j["b"] = m.b();
      j["domain_lo"] = m.domain_lo();
      j["domain_hi"] = m.domain_hi();
      return j;
    case MapVariant::triangular_closed_form:
      j["variant"] = "triangular_closed_form";
      j["branch"] = m.branch();
      return j;
    case MapVariant::composed:
      j["variant"] = "composed";
      j["outer"] = map_to_json(m.outer());
      j["inner"] = map_to_json(m.inner());
      return j;
  }
  throw IntegrityError("map_to_json: unknown variant");
}

// Theorem maps of one system share a distribution object; the cache keeps
// that sharing across a JSON round trip (and spares repeated CSV reads).
MonotoneMap map_from_json(
    const Json& j,
    std::vector<std::pair<std::string, std::shared_ptr<const Distribution>>>*
        dist_cache) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "theorem") {
    const std::string spec = j.at("dist").get<std::string>();
    std::shared_ptr<const Distribution> dist;
    for (const auto& entry : *dist_cache) {
      if (entry.first == spec) {
        dist = entry.second;
        break;
      }
    }
    if (!dist) {
      dist = std::make_shared<const Distribution>(parse_dist_spec(spec));
      dist_cache->emplace_back(spec, dist);
    }
    return MonotoneMap::theorem(dist, j.at("n").get<int>(),
                                j.at("i").get<int>());
  }
  if (variant == "affine") {
    return MonotoneMap::affine(
        j.at("a").get<double>(), j.at("b").get<double>(),
        j.at("domain_lo").get<double>(), j.at("domain_hi").get<double>());
  }
  if (variant == "triangular_closed_form") {
    return MonotoneMap::triangular_closed_form(j.at("branch").get<int>());
  }
  if (variant == "composed") {
    return MonotoneMap::composed(map_from_json(j.at("outer"), dist_cache),
                                 map_from_json(j.at("inner"), dist_cache));
  }
  throw ConstructionError("ifsp json: unknown map variant '" + variant + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw IntegrityError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::uint64_t parse_u64(const std::string& text) {
  const std::string t = trim(text);
  int base = 10;
  std::size_t start = 0;
  if (t.size() > 2 && (t.compare(0, 2, "0x") == 0 || t.compare(0, 2, "0X") == 0)) {
    base = 16;
    start = 2;
  }
  if (start >= t.size())
    throw DomainError("parse_u64: empty integer '" + text + "'");
  std::uint64_t v = 0;
  const char* begin = t.data() + start;
  const char* end = t.data() + t.size();
  const auto res = std::from_chars(begin, end, v, base);
  if (res.ec != std::errc() || res.ptr != end)
    throw DomainError("parse_u64: cannot parse '" + text +
                      "' as a 64-bit unsigned integer");
  return v;
}

Distribution parse_dist_spec(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "uniform") return Distribution::uniform01();
  if (s == "triangular") return Distribution::triangular();
  if (s == "cantor") return Distribution::cantor_uniform();
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    const std::string head = s.substr(0, colon);
    const std::string tail = s.substr(colon + 1);
    if (head == "exp")
      return Distribution::exponential(parse_double(tail, "exp spec"));
    if (head == "tabulated") {
      std::vector<double> xs, us;
      read_csv_two_columns(tail, &xs, &us);
      return Distribution::tabulated(std::move(xs), std::move(us), tail);
    }
    if (head == "empirical") {
      return Distribution::empirical_smoothed(read_csv_column(tail), 2, tail);
    }
  }
  throw ConstructionError(
      "unknown distribution spec '" + s +
      "' (expected uniform | exp:<lambda> | triangular | cantor | "
      "tabulated:<path> | empirical:<path>)");
}

std::string dist_spec_string(const Distribution& dist) {
  switch (dist.kind()) {
    case DistKind::uniform01:
      return "uniform";
    case DistKind::exponential:
      return "exp:" + format_double(dist.rate());
    case DistKind::triangular:
      return "triangular";
    case DistKind::cantor_uniform:
      return "cantor";
    case DistKind::tabulated:
      if (dist.source().empty())
        throw ConstructionError(
            "cannot serialize an in-memory tabulated grid (no source path)");
      return "tabulated:" + dist.source();
    case DistKind::empirical:
      if (dist.source().empty())
        throw ConstructionError(
            "cannot serialize an in-memory empirical distribution (no source "
            "path)");
      return "empirical:" + dist.source();
  }
  throw IntegrityError("dist_spec_string: unknown kind");
}

Json ifsp_to_json(const Ifsp& ifsp) {
  Json j;
  j["label"] = ifsp.label;
  j["n"] = ifsp.n();
  j["probs"] = ifsp.probs;
  Json maps = Json::array();
  for (const MonotoneMap& m : ifsp.maps) maps.push_back(map_to_json(m));
  j["maps"] = std::move(maps);
  return j;
}

Ifsp ifsp_from_json(const Json& j) {
  try {
    const std::string label = j.at("label").get<std::string>();
    const auto probs = j.at("probs").get<std::vector<double>>();
    const Json& maps_json = j.at("maps");
    if (!maps_json.is_array() || maps_json.empty())
      throw ConstructionError("ifsp json: maps must be a nonempty array");
    if (j.at("n").get<std::size_t>() != maps_json.size())
      throw ConstructionError("ifsp json: n does not match the map count");
    std::vector<std::pair<std::string, std::shared_ptr<const Distribution>>>
        cache;
    std::vector<MonotoneMap> maps;
    maps.reserve(maps_json.size());
    for (const Json& mj : maps_json) maps.push_back(map_from_json(mj, &cache));
    const double lo = maps.front().domain_lo();
    const double hi = maps.front().domain_hi();
    return make_ifsp(label, std::move(maps), probs, lo, hi);
  } catch (const Json::exception& e) {
    throw ConstructionError(std::string("ifsp json: ") + e.what());
  }
}

void save_ifsp(const Ifsp& ifsp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConstructionError("cannot open '" + path + "' for writing");
  out << ifsp_to_json(ifsp).dump(2) << '\n';
  if (!out) throw IntegrityError("short write to '" + path + "'");
}

Ifsp load_ifsp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConstructionError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConstructionError("cannot parse '" + path + "': " + e.what());
  }
  return ifsp_from_json(j);
}

Json ks_report_to_json(const KsReport& report) {
  Json j;
  j["statistic"] = report.statistic;
  j["n"] = report.sample_size;
  j["alpha"] = report.alpha;
  j["critical"] = report.critical_value;
  j["pass"] = report.pass;
  return j;
}

std::vector<double> read_csv_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstructionError("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(
        parse_double(t, path + ":" + std::to_string(lineno)));
  }
  return out;
}

void read_csv_two_columns(const std::string& path, std::vector<double>* xs,
                          std::vector<double>* us) {
  std::ifstream in(path);
  if (!in) throw ConstructionError("cannot open '" + path + "'");
  xs->clear();
  us->clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (comma == std::string::npos)
      throw ConstructionError(where + ": expected two comma-separated values");
    xs->push_back(parse_double(t.substr(0, comma), where));
    us->push_back(parse_double(t.substr(comma + 1), where));
  }
}

}  // namespace ifsp
