#include "pslab/manifest.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "pslab/error.hpp"

namespace pslab {

namespace {

std::string to_hex(const unsigned char* data, unsigned int n) {
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) out += fmt::format("{:02x}", data[i]);
  return out;
}

}  // namespace

struct Fingerprint::Impl {
  EVP_MD_CTX* ctx = nullptr;
  std::string digest;
};

Fingerprint::Fingerprint() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw Error("cannot initialize SHA-256");
  }
}

Fingerprint::~Fingerprint() { EVP_MD_CTX_free(impl_->ctx); }

void Fingerprint::bytes(const void* data, std::size_t n) {
  if (!impl_->digest.empty()) return;
  EVP_DigestUpdate(impl_->ctx, data, n);
}

void Fingerprint::add(std::string_view name, std::span<const double> values) {
  const auto len = static_cast<std::uint64_t>(name.size());
  bytes(&len, sizeof len);
  bytes(name.data(), name.size());
  const auto count = static_cast<std::uint64_t>(values.size());
  bytes(&count, sizeof count);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
}

void Fingerprint::add(std::string_view name, double value) { add(name, std::span<const double>(&value, 1)); }

std::string Fingerprint::hex() {
  if (impl_->digest.empty()) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_DigestFinal_ex(impl_->ctx, md, &n);
    impl_->digest = to_hex(md, n);
  }
  return impl_->digest;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &n, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  return to_hex(md, n);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void RunManifest::add_input(const std::string& path) { inputs.emplace_back(path, sha256_file(path)); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "pslab";
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["config"] = config;
  nlohmann::json in = nlohmann::json::array();
  for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = in;
  j["outputs"] = outputs;
  j["wall_time_s"] = wall_time;
  j["fingerprint"] = fingerprint;
  return j;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  out << to_json().dump(2) << '\n';
}

}  // namespace pslab
