#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "padben/cache.hpp"
#include "padben/provider.hpp"

namespace padben {

struct GatewayConfig {
  int max_attempts = 3;       // total tries per request, >= 1
  int backoff_ms = 100;       // first retry delay; doubles each retry
  double backoff_factor = 2.0;
  int max_inflight = 4;       // bound for parallel_map
  bool offline = false;       // remote providers may only answer from cache
};

struct GatewayStats {
  std::atomic<std::uint64_t> cache_hits{0};
  std::atomic<std::uint64_t> provider_calls{0};
  std::atomic<std::uint64_t> retries{0};
};

// Caching, retrying front door for all provider traffic. Identical requests
// (same provider id + canonicalized request) return byte-identical responses
// from the cache without touching the provider. Only transport errors are
// retried, with geometrically increasing delays; refusals and capability
// errors surface immediately.
class Gateway {
 public:
  Gateway(std::shared_ptr<ResponseCache> cache, GatewayConfig cfg);

  std::string generate(Provider& provider, const GenerationRequest& req);
  std::string chat(Provider& provider, const std::vector<ChatMessage>& messages,
                   const GenerationRequest& opts);
  TokenScoreList score_tokens(Provider& provider, const std::string& text);
  std::vector<double> embed(Provider& provider, const std::string& text);
  ClassifierOutput classify(Provider& provider, const std::string& text);

  const GatewayConfig& config() const { return cfg_; }
  GatewayStats& stats() { return stats_; }

  // Attempt log line per try: "<provider> attempt <k>/<n>: <outcome>".
  void set_log(std::function<void(const std::string&)> log) { log_ = std::move(log); }

 private:
  std::string cached_call(Provider& provider, const std::string& canonical_request,
                          const std::function<std::string()>& call);
  std::string with_retries(Provider& provider, const std::function<std::string()>& call);

  std::shared_ptr<ResponseCache> cache_;
  GatewayConfig cfg_;
  GatewayStats stats_;
  std::function<void(const std::string&)> log_;
};

// Runs fn(i) for i in [0, n) on up to max_inflight worker threads. Results
// land at their input index, so output order is independent of completion
// order. The first exception, if any, is rethrown after all workers finish.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int max_inflight, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(n);
  if (n == 0) return results;
  int workers = max_inflight < 1 ? 1 : max_inflight;
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

// Canonical JSON encodings used as cache keys (exposed for the script-file
// mock provider, which maps request hashes to responses).
std::string canonical_generate_request(const std::string& provider_id, const GenerationRequest& req);
std::string canonical_chat_request(const std::string& provider_id,
                                   const std::vector<ChatMessage>& messages,
                                   const GenerationRequest& opts);
std::string canonical_score_request(const std::string& provider_id, const std::string& text);
std::string canonical_embed_request(const std::string& provider_id, const std::string& text);
std::string canonical_classify_request(const std::string& provider_id, const std::string& text);

}  // namespace padben
