#pragma once

#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace padben {

// On-disk keyed store for provider responses. Keys are SHA-256 hex digests of
// the canonicalized request; values are JSON documents stored one per file
// under <dir>/<key[0:2]>/<key>.json. Readers take a shared lock; writers are
// serialized and publish via temp-file + rename so concurrent readers never
// see partial content.
class ResponseCache {
 public:
  explicit ResponseCache(std::string dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& value);

  const std::string& dir() const { return dir_; }

 private:
  std::string path_for(const std::string& key) const;

  std::string dir_;
  mutable std::shared_mutex mutex_;
};

}  // namespace padben
