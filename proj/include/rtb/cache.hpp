#pragma once
/**
 * @file cache.hpp
 * @brief Disk cache for beam-decomposition JSON payloads.
 *
 * Entries are keyed by angle, precision, band, and schema version; payloads
 * are stored verbatim alongside an FNV-1a checksum and written atomically
 * (temp file + rename), so a hit returns the bytes that were stored or
 * nothing at all.
 */

#include <optional>
#include <string>

#include "rtb/angle.hpp"

namespace rtb {

class BeamCache {
 public:
  /// Opens (creating if needed) the cache rooted at `dir`.
  explicit BeamCache(std::string dir);

  /// Stable file name for one (angle, precision, band) entry.
  std::string key(const AngleSpec& alpha, long precision, int M, int N) const;

  /// Serialized beam-table payload for the key, if present and intact
  /// (version and checksum both verified); otherwise nullopt.
  std::optional<std::string> lookup(const std::string& key) const;

  /// Atomically stores `payload` under `key`.
  void store(const std::string& key, const std::string& payload) const;

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

}  // namespace rtb
