#pragma once

#include <json.hpp>

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pslab {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
/// Throws ConfigError when the file cannot be read.
std::string sha256_file(const std::string& path);

/// Running SHA-256 over named numeric arrays. The digest depends on names,
/// lengths and exact bit patterns, so it detects any change in emitted data.
class Fingerprint {
 public:
  Fingerprint();
  ~Fingerprint();
  Fingerprint(const Fingerprint&) = delete;
  Fingerprint& operator=(const Fingerprint&) = delete;

  void add(std::string_view name, std::span<const double> values);
  void add(std::string_view name, double value);
  /// Finalizes on first call; later add() calls are ignored.
  std::string hex();

 private:
  struct Impl;
  void bytes(const void* data, std::size_t n);
  std::unique_ptr<Impl> impl_;
};

struct RunManifest {
  std::string version = kToolVersion;
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  /// path → SHA-256
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> outputs;
  double wall_time = 0.0;
  std::string fingerprint;

  void add_input(const std::string& path);
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

}  // namespace pslab
