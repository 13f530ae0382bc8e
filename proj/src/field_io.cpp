#include "pslab/field_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "pslab/error.hpp"

namespace pslab {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(fmt::format("field file: missing key '{}'", key));
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(fmt::format("field file: '{}' must be a number", path));
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(fmt::format("field file: '{}' must be an array", path));
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], fmt::format("{}[{}]", path, i)));
  return out;
}

}  // namespace

json field_to_json(const SolutionPair& pair, const std::optional<ProfileMeta>& profile) {
  const GridSpec& g = pair.grid();
  json j;
  j["version"] = kFieldVersion;
  j["dim"] = g.dim();
  std::vector<int> n;
  std::vector<double> lo;
  std::vector<double> hi;
  for (int a = 0; a < g.dim(); ++a) {
    n.push_back(g.n(a));
    lo.push_back(g.lo(a));
    hi.push_back(g.hi(a));
  }
  j["n"] = n;
  j["lo"] = lo;
  j["hi"] = hi;
  j["beta"] = pair.beta();
  j["u"] = std::vector<double>(pair.u().values().begin(), pair.u().values().end());
  j["v"] = std::vector<double>(pair.v().values().begin(), pair.v().values().end());
  if (profile) {
    j["profile"] = {{"slope", profile->slope},
                    {"offset", profile->offset},
                    {"shift", profile->shift},
                    {"t0", profile->t0},
                    {"residual_norm", profile->residual_norm},
                    {"symmetry_defect", profile->symmetry_defect}};
  }
  return j;
}

FieldFile field_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("field file: top level must be an object");
  const json& version = require(j, "version");
  if (!version.is_string() || version.get<std::string>() != kFieldVersion) {
    throw ShapeError(fmt::format("field file: version {} is not '{}'", version.dump(), kFieldVersion));
  }
  const json& dim_j = require(j, "dim");
  if (!dim_j.is_number_integer()) throw ConfigError("field file: 'dim' must be an integer");
  const int dim = dim_j.get<int>();
  if (dim < 1 || dim > 3) throw ShapeError(fmt::format("field file: dim {} not in 1..3", dim));

  const std::vector<double> lo = numbers(require(j, "lo"), "lo");
  const std::vector<double> hi = numbers(require(j, "hi"), "hi");
  const json& n_j = require(j, "n");
  if (!n_j.is_array()) throw ConfigError("field file: 'n' must be an array");
  std::vector<int> n;
  for (std::size_t i = 0; i < n_j.size(); ++i) {
    if (!n_j[i].is_number_integer()) throw ConfigError(fmt::format("field file: 'n[{}]' must be an integer", i));
    n.push_back(n_j[i].get<int>());
  }
  const auto d = static_cast<std::size_t>(dim);
  if (n.size() != d || lo.size() != d || hi.size() != d) {
    throw ShapeError(fmt::format("field file: n/lo/hi must have {} entries", dim));
  }
  const GridSpec grid = GridSpec::make(dim, lo, hi, n);

  std::vector<double> u = numbers(require(j, "u"), "u");
  std::vector<double> v = numbers(require(j, "v"), "v");
  if (u.size() != grid.size() || v.size() != grid.size()) {
    throw ShapeError(fmt::format("field file: u has {} and v has {} values, expected {}", u.size(), v.size(),
                                 grid.size()));
  }

  FieldFile out;
  double beta = 1.0;
  if (j.contains("beta")) {
    beta = number(j.at("beta"), "beta");
  } else {
    out.warnings.emplace_back("field file has no 'beta'; assuming beta = 1");
    std::cerr << "warning: " << out.warnings.back() << '\n';
  }
  out.pair = SolutionPair(ScalarField(grid, std::move(u)), ScalarField(grid, std::move(v)), beta);
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    ProfileMeta meta;
    meta.slope = number(require(p, "slope"), "profile.slope");
    meta.offset = p.contains("offset") ? number(p.at("offset"), "profile.offset") : 0.0;
    meta.shift = p.contains("shift") ? number(p.at("shift"), "profile.shift") : 0.0;
    meta.t0 = number(require(p, "t0"), "profile.t0");
    meta.residual_norm = number(require(p, "residual_norm"), "profile.residual_norm");
    meta.symmetry_defect = number(require(p, "symmetry_defect"), "profile.symmetry_defect");
    out.profile = meta;
  }
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: malformed JSON at byte {}: {}", path, e.byte, e.what()));
  }
}

void write_field(const std::string& path, const SolutionPair& pair, const std::optional<ProfileMeta>& profile) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  out << field_to_json(pair, profile).dump() << '\n';
}

FieldFile read_field_file(const std::string& path) { return field_from_json(read_json(path)); }

SolutionPair read_field(const std::string& path) { return read_field_file(path).pair; }

void write_profile(const std::string& path, const Profile1D& p, double symmetry_defect) {
  ProfileMeta meta;
  meta.slope = p.slope;
  meta.offset = p.offset;
  meta.shift = p.shift;
  meta.t0 = p.t0;
  meta.residual_norm = p.residual_norm;
  meta.symmetry_defect = symmetry_defect;
  write_field(path, profile_pair(p), meta);
}

Profile1D read_profile(const std::string& path) {
  const FieldFile f = read_field_file(path);
  const GridSpec& g = f.pair.grid();
  if (g.dim() != 1 || !f.profile) throw ShapeError(fmt::format("'{}' is not a one-dimensional profile file", path));
  if (std::abs(g.lo(0) + g.hi(0)) > 1e-12 * g.hi(0)) throw ShapeError("profile interval must be symmetric");
  Profile1D p;
  p.L = g.hi(0);
  p.n = g.n(0);
  p.h = g.h();
  p.u.assign(f.pair.u().values().begin(), f.pair.u().values().end());
  p.v.assign(f.pair.v().values().begin(), f.pair.v().values().end());
  p.slope = f.profile->slope;
  p.offset = f.profile->offset;
  p.shift = f.profile->shift;
  p.t0 = f.profile->t0;
  p.residual_norm = f.profile->residual_norm;
  return p;
}

}  // namespace pslab
