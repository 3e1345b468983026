#include "cesradon/sample_cache.hpp"

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "cesradon/error.hpp"

namespace cesradon {
namespace {

constexpr const char* kMagic = "cesradon-cache v1";

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

}  // namespace

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SampleCache::SampleCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<SampleCache> SampleCache::from_env() {
  const char* env = std::getenv("CESRADON_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return SampleCache(env);
}

std::filesystem::path SampleCache::path_for(const std::string& key) const {
  return dir_ / (fnv1a_hex(key) + ".bin");
}

std::optional<std::vector<double>> SampleCache::load(const std::string& key, std::size_t expected) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::string magic;
  std::string stored_key;
  if (!std::getline(in, magic) || magic != kMagic) return std::nullopt;
  if (!std::getline(in, stored_key) || stored_key != fnv1a_hex(key)) return std::nullopt;
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t raw = 0;
    if (!in.read(reinterpret_cast<char*>(&raw), sizeof raw)) return std::nullopt;
    raw = to_le(raw);
    std::memcpy(&out[i], &raw, sizeof raw);
  }
  if (in.peek() != std::ifstream::traits_type::eof()) return std::nullopt;
  return out;
}

void SampleCache::store(const std::string& key, std::span<const double> values) const {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create cache directory " + dir_.string());
  const std::filesystem::path final_path = path_for(key);
  std::ostringstream tmp_name;
  tmp_name << final_path.string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << "." << counter.fetch_add(1);
  const std::filesystem::path tmp(tmp_name.str());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot write cache file " + tmp.string());
    out << kMagic << '\n' << fnv1a_hex(key) << '\n';
    for (double v : values) {
      std::uint64_t raw = 0;
      std::memcpy(&raw, &v, sizeof raw);
      raw = to_le(raw);
      out.write(reinterpret_cast<const char*>(&raw), sizeof raw);
    }
    if (!out) fail(ErrorKind::IoError, "short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::IoError, "cannot publish cache file " + final_path.string());
  }
}

}  // namespace cesradon
