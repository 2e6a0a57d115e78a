#include "rtb/cache.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace rtb {

namespace {

constexpr int kCacheVersion = 1;

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += c;
    else if (c == '/' || c == '.' || c == '-' || c == '*')
      out += '_';
    // other characters dropped
  }
  return out;
}

}  // namespace

BeamCache::BeamCache(std::string dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

std::string BeamCache::key(const AngleSpec& alpha, long precision, int M,
                           int N) const {
  std::ostringstream k;
  k << "beams_" << sanitize(alpha.canonical()) << "_p" << precision << "_"
    << (M < 0 ? "bm" : "b") << std::abs(M) << "_" << (N < 0 ? "nm" : "n")
    << std::abs(N) << "_v" << kCacheVersion << ".json";
  return k.str();
}

std::optional<std::string> BeamCache::lookup(const std::string& key) const {
  fs::path p = fs::path(dir_) / key;
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json wrapper;
  try {
    in >> wrapper;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!wrapper.is_object() || !wrapper.contains("cache_version") ||
      wrapper["cache_version"].get<int>() != kCacheVersion ||
      !wrapper.contains("checksum") || !wrapper.contains("payload"))
    return std::nullopt;
  std::string payload = wrapper["payload"].get<std::string>();
  if (fnv1a_hex(payload) != wrapper["checksum"].get<std::string>())
    return std::nullopt;
  return payload;
}

void BeamCache::store(const std::string& key,
                      const std::string& payload) const {
  nlohmann::json wrapper;
  wrapper["cache_version"] = kCacheVersion;
  wrapper["checksum"] = fnv1a_hex(payload);
  wrapper["payload"] = payload;
  fs::path final = fs::path(dir_) / key;
  fs::path tmp = final;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cache: cannot write " + tmp.string());
    out << wrapper.dump(2) << "\n";
    if (!out) throw std::runtime_error("cache: write failed " + tmp.string());
  }
  fs::rename(tmp, final);
}

}  // namespace rtb
