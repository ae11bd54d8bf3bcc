#pragma once

#include <nlohmann/json_fwd.hpp>

#include "padben/provider.hpp"

namespace padben {

// Builds a provider from its JSON binding, e.g.
//   {"kind": "mock_logprob", "salt": 1}
//   {"kind": "mock_uniform", "vocab": 100}
//   {"kind": "script", "path": "replies.json", "id": "scripted"}
//   {"kind": "http", "name": "myprov", "base_url": "https://...", "model": "..."}
// An optional "flaky_failures" wraps the provider with simulated transport
// failures (testing only).
ProviderPtr make_provider(const nlohmann::json& spec);

}  // namespace padben
