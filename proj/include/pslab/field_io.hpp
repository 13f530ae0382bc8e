#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/ode1d.hpp"

namespace pslab {

inline constexpr const char* kFieldVersion = "PSLAB-FIELD v1";

/// Extra keys stored with a one-dimensional heteroclinic profile.
struct ProfileMeta {
  double slope = 1.0;
  double offset = 0.0;
  double shift = 0.0;
  double t0 = 0.0;
  double residual_norm = 0.0;
  double symmetry_defect = 0.0;
};

struct FieldFile {
  SolutionPair pair;
  std::optional<ProfileMeta> profile;
  std::vector<std::string> warnings;
};

/// {"version", "dim", "n", "lo", "hi", "beta", "u", "v"[, "profile"]}
nlohmann::json field_to_json(const SolutionPair& pair, const std::optional<ProfileMeta>& profile = std::nullopt);

/// Throws ShapeError on a version or shape mismatch and ConfigError on
/// missing or mistyped keys. A missing beta defaults to 1 with a warning.
FieldFile field_from_json(const nlohmann::json& j);

void write_field(const std::string& path, const SolutionPair& pair,
                 const std::optional<ProfileMeta>& profile = std::nullopt);
/// Parse errors become ConfigError naming the byte offset.
FieldFile read_field_file(const std::string& path);
SolutionPair read_field(const std::string& path);

/// Profile record (metadata plus arrays) in the field format.
void write_profile(const std::string& path, const Profile1D& p, double symmetry_defect);
/// Rebuilds a Profile1D from a one-dimensional field file with profile keys.
Profile1D read_profile(const std::string& path);

/// Reads a whole JSON document, mapping parse failures to ConfigError.
nlohmann::json read_json(const std::string& path);

}  // namespace pslab
