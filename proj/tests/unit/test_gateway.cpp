#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "padben/error.hpp"
#include "padben/gateway.hpp"
#include "padben/hashing.hpp"
#include "padben/mocks.hpp"
#include "test_util.hpp"

using namespace padben;

namespace {

// Counts raw calls so cache hits are observable.
class CountingProvider : public Provider {
 public:
  explicit CountingProvider(std::string reply = "pong") : reply_(std::move(reply)) {}
  std::string id() const override { return "counting"; }
  Capabilities capabilities() const override { return {.generate = true}; }
  std::string generate(const GenerationRequest&) override {
    ++calls;
    return reply_;
  }
  int calls = 0;

 private:
  std::string reply_;
};

Gateway make_gateway(const TempDir& dir, GatewayConfig cfg = {}) {
  cfg.backoff_ms = 0;
  return Gateway(std::make_shared<ResponseCache>(dir.file("cache")), cfg);
}

}  // namespace

TEST_CASE("repeat requests are served from the cache with zero provider calls") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  CountingProvider provider;
  GenerationRequest req{.prompt = "question one", .temperature = 0.5, .max_tokens = 32};

  CHECK(gateway.generate(provider, req) == "pong");
  CHECK(provider.calls == 1);
  CHECK(gateway.generate(provider, req) == "pong");
  CHECK(provider.calls == 1);  // cache hit
  CHECK(gateway.stats().cache_hits.load() == 1);
}

TEST_CASE("a fresh gateway over the same cache directory replays responses") {
  TempDir dir;
  GenerationRequest req{.prompt = "persisted", .temperature = 0.0, .max_tokens = 8};
  {
    auto gateway = make_gateway(dir);
    CountingProvider provider("first answer");
    CHECK(gateway.generate(provider, req) == "first answer");
  }
  {
    auto gateway = make_gateway(dir);
    CountingProvider provider("different now");
    CHECK(gateway.generate(provider, req) == "first answer");  // byte-identical replay
    CHECK(provider.calls == 0);
  }
}

TEST_CASE("request fields are part of the cache key") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  CountingProvider provider;
  GenerationRequest a{.prompt = "same", .temperature = 0.1, .max_tokens = 8};
  GenerationRequest b = a;
  b.temperature = 0.2;
  gateway.generate(provider, a);
  gateway.generate(provider, b);
  CHECK(provider.calls == 2);
  CHECK(canonical_generate_request("p", a) != canonical_generate_request("p", b));
}

TEST_CASE("echo mock returns its prompt") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto echo = make_echo_provider();
  CHECK(gateway.generate(*echo, {.prompt = "abc", .temperature = 0, .max_tokens = 4}) == "abc");
}

TEST_CASE("empty generations are refusals and are not cached") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  CountingProvider provider("");
  GenerationRequest req{.prompt = "anything", .temperature = 0, .max_tokens = 4};
  CHECK_THROWS_WITH_AS(gateway.generate(provider, req), doctest::Contains("empty generation"), Error);
  CHECK_THROWS_AS(gateway.generate(provider, req), Error);
  CHECK(provider.calls == 2);  // second call hit the provider again
}

TEST_CASE("transport failures retry with a bounded attempt count") {
  TempDir dir;
  GatewayConfig cfg;
  cfg.max_attempts = 3;
  auto gateway = make_gateway(dir, cfg);

  std::vector<std::string> log;
  gateway.set_log([&](const std::string& line) { log.push_back(line); });

  auto flaky = make_flaky_provider(make_echo_provider(), 2);
  CHECK(gateway.generate(*flaky, {.prompt = "hello", .temperature = 0, .max_tokens = 4}) == "hello");
  CHECK(gateway.stats().retries.load() == 2);
  REQUIRE(log.size() == 3);  // two failures + one success, all observable
  CHECK(log[2].find("ok") != std::string::npos);
}

TEST_CASE("retries are exhausted after max_attempts") {
  TempDir dir;
  GatewayConfig cfg;
  cfg.max_attempts = 3;
  auto gateway = make_gateway(dir, cfg);
  auto flaky = make_flaky_provider(make_echo_provider(), 5);
  CHECK_THROWS_AS(gateway.generate(*flaky, {.prompt = "x", .temperature = 0, .max_tokens = 4}),
                  Error);
  CHECK(gateway.stats().provider_calls.load() == 3);
}

TEST_CASE("refusals are not retried") {
  TempDir dir;
  GatewayConfig cfg;
  cfg.max_attempts = 5;
  auto gateway = make_gateway(dir, cfg);

  class Refusing : public Provider {
   public:
    std::string id() const override { return "refusing"; }
    Capabilities capabilities() const override { return {.generate = true}; }
    std::string generate(const GenerationRequest&) override {
      ++calls;
      raise(ErrorCode::refusal, "will not comply");
    }
    int calls = 0;
  } provider;

  CHECK_THROWS_AS(gateway.generate(provider, {.prompt = "x", .temperature = 0, .max_tokens = 4}),
                  Error);
  CHECK(provider.calls == 1);
  try {
    gateway.generate(provider, {.prompt = "x", .temperature = 0, .max_tokens = 4});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::refusal);
  }
}

TEST_CASE("token scoring is deterministic and cached") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto scorer = make_mock_logprob_provider(3);
  auto first = gateway.score_tokens(*scorer, "some words to score");
  auto second = gateway.score_tokens(*scorer, "some words to score");
  REQUIRE(first.scores.size() == second.scores.size());
  for (std::size_t i = 0; i < first.scores.size(); ++i) {
    CHECK(first.scores[i].token == second.scores[i].token);
    CHECK(first.scores[i].logprob == second.scores[i].logprob);
    CHECK(first.scores[i].rank == second.scores[i].rank);
    CHECK(first.scores[i].topk == second.scores[i].topk);
  }
}

TEST_CASE("scoring empty text is an error") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto scorer = make_mock_logprob_provider(3);
  CHECK_THROWS_AS(gateway.score_tokens(*scorer, ""), Error);
}

TEST_CASE("uniform mock scores every token at -ln(vocab)") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto scorer = make_uniform_logprob_provider(100);
  auto scores = gateway.score_tokens(*scorer, "four tokens right here");
  REQUIRE(scores.scores.size() == 4);
  for (const auto& s : scores.scores) {
    CHECK(s.logprob == doctest::Approx(-std::log(100.0)).epsilon(1e-12));
    CHECK(s.rank == 1);
  }
}

TEST_CASE("const embedder and classifier mocks honor their contracts") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto embed = make_const_embed_provider({1.0, 0.0});
  CHECK(gateway.embed(*embed, "x") == std::vector<double>{1.0, 0.0});
  auto classify = make_const_classifier_provider(0.0, 0.0);
  auto out = gateway.classify(*classify, "anything");
  CHECK(out.logits[0] == 0.0);
  CHECK(out.logits[1] == 0.0);
}

TEST_CASE("scripted chat provider replays and then refuses") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  ScriptedChatProvider judge({"1", "0"});
  GenerationRequest opts{.prompt = "", .temperature = 0, .max_tokens = 4};
  CHECK(gateway.chat(judge, {{"user", "q1"}}, opts) == "1");
  CHECK(gateway.chat(judge, {{"user", "q2"}}, opts) == "0");
  CHECK_THROWS_AS(gateway.chat(judge, {{"user", "q3"}}, opts), Error);
  CHECK(judge.calls() == 2);
}

TEST_CASE("parallel_map preserves input order and propagates errors") {
  std::vector<int> inputs(100);
  for (int i = 0; i < 100; ++i) inputs[static_cast<std::size_t>(i)] = i;
  auto doubled = parallel_map<int>(inputs.size(), 8, [&](std::size_t i) {
    return inputs[i] * 2;
  });
  for (int i = 0; i < 100; ++i) CHECK(doubled[static_cast<std::size_t>(i)] == 2 * i);

  CHECK_THROWS_AS(parallel_map<int>(10, 4,
                                    [](std::size_t i) -> int {
                                      if (i == 7) throw Error(ErrorCode::internal, "boom");
                                      return 0;
                                    }),
                  Error);
}

TEST_CASE("garbled cache entries fall back to the provider and heal") {
  TempDir dir;
  GenerationRequest req{.prompt = "healing", .temperature = 0.0, .max_tokens = 8};
  const std::string key = sha256_hex(canonical_generate_request("counting", req));
  {
    auto gateway = make_gateway(dir);
    CountingProvider provider("fresh");
    CHECK(gateway.generate(provider, req) == "fresh");
  }
  // truncate the entry on disk
  const std::string entry_path = dir.file("cache/" + key.substr(0, 2) + "/" + key + ".json");
  {
    std::ofstream out(entry_path, std::ios::binary | std::ios::trunc);
    out << "{\"resp";
  }
  auto gateway = make_gateway(dir);
  CountingProvider provider("healed");
  CHECK(gateway.generate(provider, req) == "healed");
  CHECK(provider.calls == 1);
  CHECK(gateway.generate(provider, req) == "healed");  // rewritten entry replays
  CHECK(provider.calls == 1);
}

TEST_CASE("script-file providers answer by request hash") {
  TempDir dir;
  auto gateway = make_gateway(dir);

  GenerationRequest req{.prompt = "scripted question", .temperature = 0.0, .max_tokens = 8};
  const std::string key = sha256_hex(canonical_generate_request("replayer", req));
  nlohmann::json script{{key, "scripted answer"}, {"*", "fallback"}};
  dir.write("script.json", script.dump());

  auto provider = make_script_file_provider(dir.file("script.json"), "replayer");
  CHECK(gateway.generate(*provider, req) == "scripted answer");
  GenerationRequest other{.prompt = "unscripted", .temperature = 0.0, .max_tokens = 8};
  CHECK(gateway.generate(*provider, other) == "fallback");

  nlohmann::json strict{{key, "only this"}};
  dir.write("strict.json", strict.dump());
  auto strict_provider = make_script_file_provider(dir.file("strict.json"), "replayer2");
  CHECK_THROWS_AS(gateway.generate(*strict_provider, other), Error);
}

TEST_CASE("offline mode blocks uncached remote providers only") {
  TempDir dir;

  class RemoteEcho : public Provider {
   public:
    std::string id() const override { return "remote"; }
    Capabilities capabilities() const override { return {.generate = true}; }
    bool is_remote() const override { return true; }
    std::string generate(const GenerationRequest& req) override { return req.prompt; }
  };

  GenerationRequest req{.prompt = "live call", .temperature = 0, .max_tokens = 4};
  {
    auto gateway = make_gateway(dir);
    RemoteEcho remote;
    CHECK(gateway.generate(remote, req) == "live call");  // warm the cache
  }
  {
    GatewayConfig cfg;
    cfg.offline = true;
    auto gateway = make_gateway(dir, cfg);
    RemoteEcho remote;
    CHECK(gateway.generate(remote, req) == "live call");  // replay
    GenerationRequest fresh{.prompt = "uncached", .temperature = 0, .max_tokens = 4};
    CHECK_THROWS_WITH_AS(gateway.generate(remote, fresh), doctest::Contains("offline"), Error);
    auto local = make_echo_provider();
    CHECK(gateway.generate(*local, fresh) == "uncached");  // mocks unaffected
  }
}
