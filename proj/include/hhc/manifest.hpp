#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace hhc {

inline constexpr const char* kToolVersion = "1.0.0";

// FNV-1a 64 over raw bytes; platform-independent content digest.
inline std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::string subcommand;
  std::int64_t timestamp = 0;  // UTC seconds; excluded from comparison hashes

  nlohmann::ordered_json to_json() const {
    return {{"tool_version", tool_version},
            {"input_digest", input_digest},
            {"seed", seed},
            {"subcommand", subcommand},
            {"timestamp", timestamp}};
  }
};

inline RunManifest make_manifest(const std::string& subcommand, const std::string& input_bytes,
                                 std::uint64_t seed) {
  RunManifest m;
  m.subcommand = subcommand;
  m.input_digest = content_digest(input_bytes);
  m.seed = seed;
  m.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();
  return m;
}

}  // namespace hhc
