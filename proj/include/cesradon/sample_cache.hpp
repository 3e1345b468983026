#pragma once

// Read-through disk cache for log-grid samples.
// File layout: "cesradon-cache v1\n", "<key>\n", then raw little-endian
// float64 values in row-major grid order. Writers go through a temp file and
// rename(), so concurrent readers never see a partial file.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cesradon {

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

class SampleCache {
 public:
  explicit SampleCache(std::filesystem::path dir);
  /// Cache rooted at $CESRADON_CACHE_DIR, if set and non-empty.
  static std::optional<SampleCache> from_env();

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(const std::string& key) const;

  /// Empty when missing, truncated, or written for a different key.
  std::optional<std::vector<double>> load(const std::string& key, std::size_t expected) const;
  void store(const std::string& key, std::span<const double> values) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace cesradon
