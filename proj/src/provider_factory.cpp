#include "padben/provider_factory.hpp"

#include <nlohmann/json.hpp>

#include "padben/error.hpp"
#include "padben/http_provider.hpp"
#include "padben/mocks.hpp"

namespace padben {

ProviderPtr make_provider(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    raise(ErrorCode::invalid_argument, "provider binding needs a \"kind\" field");
  }
  const std::string kind = spec["kind"].get<std::string>();
  const std::uint64_t salt = spec.value("salt", std::uint64_t{0});
  const std::string id = spec.value("id", kind + (salt ? "_" + std::to_string(salt) : ""));

  ProviderPtr provider;
  if (kind == "mock_echo") {
    provider = make_echo_provider(id);
  } else if (kind == "mock_completion") {
    provider = make_mock_completion_provider(salt, id);
  } else if (kind == "mock_paraphrase") {
    provider = make_mock_paraphrase_provider(salt, id);
  } else if (kind == "mock_identity") {
    provider = make_identity_paraphrase_provider(id);
  } else if (kind == "mock_logprob") {
    provider = make_mock_logprob_provider(salt, id);
  } else if (kind == "mock_uniform") {
    provider = make_uniform_logprob_provider(spec.value("vocab", 100), id);
  } else if (kind == "mock_embed") {
    provider = make_mock_embed_provider(spec.value("dim", 16), salt, id);
  } else if (kind == "mock_const_embed") {
    provider = make_const_embed_provider(spec.at("vector").get<std::vector<double>>(), id);
  } else if (kind == "mock_classifier") {
    provider = make_mock_classifier_provider(salt, id);
  } else if (kind == "mock_const_classifier") {
    auto logits = spec.at("logits").get<std::vector<double>>();
    if (logits.size() != 2) raise(ErrorCode::invalid_argument, "logits must have length 2");
    provider = make_const_classifier_provider(logits[0], logits[1], id);
  } else if (kind == "mock_judge") {
    provider = make_mock_judge_provider(salt, id);
  } else if (kind == "script") {
    provider = make_script_file_provider(spec.at("path").get<std::string>(), id);
  } else if (kind == "http") {
    HttpProviderConfig cfg;
    cfg.name = spec.at("name").get<std::string>();
    cfg.base_url = spec.at("base_url").get<std::string>();
    cfg.model = spec.value("model", "");
    cfg.api_key_env = spec.value("api_key_env", "");
    cfg.timeout_seconds = spec.value("timeout_seconds", 60);
    cfg.logprobs_topk = spec.value("logprobs_topk", 5);
    cfg.max_input_tokens = spec.value("max_input_tokens", 0);
    provider = make_http_provider(cfg);
  } else {
    raise(ErrorCode::invalid_argument, "unknown provider kind: " + kind);
  }

  if (int failures = spec.value("flaky_failures", 0); failures > 0) {
    provider = make_flaky_provider(provider, failures);
  }
  return provider;
}

}  // namespace padben
