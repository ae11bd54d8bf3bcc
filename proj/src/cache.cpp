#include "padben/cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "padben/error.hpp"

namespace padben {

ResponseCache::ResponseCache(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) raise(ErrorCode::io, "cannot create cache directory: " + dir_);
}

std::string ResponseCache::path_for(const std::string& key) const {
  return dir_ + "/" + key.substr(0, 2) + "/" + key + ".json";
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ResponseCache::put(const std::string& key, const std::string& value) {
  std::unique_lock lock(mutex_);
  const std::string path = path_for(key);
  std::filesystem::path p(path);
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::io, "cannot write cache entry: " + tmp);
    out << value;
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::io, "cannot publish cache entry: " + path);
}

}  // namespace padben
