#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "padben/error.hpp"
#include "padben/mocks.hpp"
#include "padben/qa.hpp"
#include "padben/rng.hpp"
#include "padben/textutil.hpp"
#include "test_util.hpp"

using namespace padben;

namespace {

Gateway make_gateway(const TempDir& dir) {
  GatewayConfig cfg;
  cfg.backoff_ms = 0;
  return Gateway(std::make_shared<ResponseCache>(dir.file("cache")), cfg);
}

SentenceGroup full_group(std::int64_t id, const std::string& t1, const std::string& t2,
                         const std::string& t3, const std::string& t4, const std::string& t51,
                         const std::string& t53) {
  SentenceGroup g;
  g.group_id = id;
  g.type1 = t1;
  g.type2 = t2;
  g.type3 = t3;
  g.type4 = t4;
  g.type5_1st = t51;
  g.type5_3rd = t53;
  return g;
}

// Fixed per-token logprobs for perplexity arithmetic tests.
class FixedLogprobs : public Provider {
 public:
  explicit FixedLogprobs(std::vector<double> logprobs) : logprobs_(std::move(logprobs)) {}
  std::string id() const override { return "fixed_lp"; }
  Capabilities capabilities() const override { return {.logprobs = true}; }
  TokenScoreList score_tokens(const std::string& text) override {
    TokenScoreList list;
    auto tokens = ws_tokens(text);
    REQUIRE(tokens.size() == logprobs_.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      list.scores.push_back({tokens[i], logprobs_[i], 1, {}});
    }
    return list;
  }

 private:
  std::vector<double> logprobs_;
};

}  // namespace

TEST_CASE("jaccard basics") {
  CHECK(jaccard("the same text", "the same text") == 1.0);
  CHECK(jaccard("a b", "b c") == doctest::Approx(1.0 / 3.0));
  CHECK(jaccard("alpha beta", "gamma delta") == 0.0);
  CHECK(jaccard("", "") == 1.0);
}

TEST_CASE("jaccard matrix over identical fields is all ones") {
  std::vector<SentenceGroup> groups{
      full_group(0, "same text here", "same text here", "same text here", "same text here",
                 "same text here", "same text here"),
      full_group(1, "other words now", "other words now", "other words now", "other words now",
                 "other words now", "other words now"),
  };
  auto m = jaccard_matrix(groups);
  for (int i = 0; i < kNumTextTypes; ++i) {
    for (int j = 0; j < kNumTextTypes; ++j) {
      CHECK(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1.0);
    }
  }
}

TEST_CASE("jaccard matrix matches a two-group hand computation") {
  // Group 0 fields (token sets): t1={a,b} t2={b,c} t3={a,b} t4={c,d}
  // t5_1st={b} t5_3rd={d}. Group 1: every field = {x,y}, contributing 1 to
  // every pair mean. Entry = (J0(i,j) + 1) / 2.
  std::vector<SentenceGroup> groups{
      full_group(0, "a b", "b c", "a b", "c d", "b", "d"),
      full_group(1, "x y", "x y", "x y", "x y", "x y", "x y"),
  };
  auto m = jaccard_matrix(groups);
  auto at = [&](int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };

  const double half = 0.5;
  CHECK(at(0, 1) == doctest::Approx((1.0 / 3.0 + 1.0) * half));  // t1 vs t2
  CHECK(at(0, 2) == doctest::Approx(1.0));                       // t1 vs t3 identical both groups
  CHECK(at(0, 3) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(0, 4) == doctest::Approx((0.5 + 1.0) * half));
  CHECK(at(0, 5) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(1, 2) == doctest::Approx((1.0 / 3.0 + 1.0) * half));
  CHECK(at(1, 3) == doctest::Approx((1.0 / 3.0 + 1.0) * half));
  CHECK(at(1, 4) == doctest::Approx((0.5 + 1.0) * half));
  CHECK(at(1, 5) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(2, 3) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(2, 4) == doctest::Approx((0.5 + 1.0) * half));
  CHECK(at(2, 5) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(3, 4) == doctest::Approx((0.0 + 1.0) * half));
  CHECK(at(3, 5) == doctest::Approx((0.5 + 1.0) * half));
  CHECK(at(4, 5) == doctest::Approx((0.0 + 1.0) * half));

  for (int i = 0; i < kNumTextTypes; ++i) {
    CHECK(at(i, i) == 1.0);
    for (int j = 0; j < kNumTextTypes; ++j) CHECK(at(i, j) == at(j, i));
  }
}

TEST_CASE("jaccard matrix requires every field") {
  SentenceGroup g;
  g.group_id = 7;
  g.type1 = "present";
  g.type3 = "present";
  CHECK_THROWS_WITH_AS(jaccard_matrix({g}), doctest::Contains("missing"), Error);
}

TEST_CASE("perplexity of the uniform mock equals the vocabulary size") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  auto scorer = make_uniform_logprob_provider(100);
  CHECK(perplexity("several words to score here", gateway, *scorer) ==
        doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("perplexity arithmetic on fixed logprobs") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  FixedLogprobs scorer({-1.0, -3.0});
  CHECK(perplexity("two tokens", gateway, scorer) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-12));
  FixedLogprobs certain({0.0, 0.0, 0.0});
  CHECK(perplexity("three sure tokens", gateway, certain) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perplexity is invariant under score order") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  FixedLogprobs ab({-0.5, -2.5});
  FixedLogprobs ba({-2.5, -0.5});
  CHECK(perplexity("x y", gateway, ab) == doctest::Approx(perplexity("x y", gateway, ba)));
}

TEST_CASE("self-bleu of an identical corpus is exactly one") {
  std::vector<std::string> corpus(4, "four tokens are here today");
  CHECK(self_bleu(corpus) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("self-bleu of a disjoint pair hits the smoothed floor") {
  // candidate 5 tokens vs one disjoint reference: p1 = 1/6, p2 = 1/5,
  // p3 = 1/4, p4 = 1/3, BP = 1 -> BLEU = (1/360)^(1/4) for both directions.
  std::vector<std::string> corpus{"a b c d e", "v w x y z"};
  const double expected = std::pow(1.0 / 360.0, 0.25);
  CHECK(self_bleu(corpus) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("singleton corpus is an error") {
  CHECK_THROWS_AS(self_bleu({"only one text"}), Error);
}

TEST_CASE("duplicating a text never decreases self-bleu") {
  Rng rng(77);
  const char* words[] = {"red", "blue", "green", "stone", "river", "cloud", "light", "sound"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> corpus;
    const std::size_t n = 2 + rng.next_below(4);
    for (std::size_t i = 0; i < n; ++i) {
      std::string text;
      const std::size_t len = 4 + rng.next_below(5);
      for (std::size_t w = 0; w < len; ++w) {
        text += words[rng.next_below(8)];
        text += ' ';
      }
      corpus.push_back(text);
    }
    const double before = self_bleu(corpus);
    auto extended = corpus;
    extended.push_back(corpus[rng.next_below(corpus.size())]);
    const double after = self_bleu(extended);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("quality report serializes with the type-by-metric table shape") {
  TempDir dir;
  auto gateway = make_gateway(dir);
  std::vector<SentenceGroup> groups{
      full_group(0, "first sample sentence here", "second sample sentence here",
                 "third sample sentence here", "fourth sample sentence here",
                 "fifth sample sentence here", "sixth sample sentence here"),
      full_group(1, "another group first text", "another group second text",
                 "another group third text", "another group fourth text",
                 "another group fifth text", "another group sixth text"),
  };
  std::vector<ProviderPtr> scorers{make_uniform_logprob_provider(50, "u50"),
                                   make_uniform_logprob_provider(200, "u200")};
  auto report = quality_report(groups, gateway, scorers);
  CHECK(report.perplexity.at("u50")[0] == doctest::Approx(50.0));
  CHECK(report.perplexity.at("u200")[5] == doctest::Approx(200.0));

  const std::string csv = quality_report_csv(report);
  CHECK(csv.find("text_type,ppl_u200,ppl_u50,self_bleu") == 0);
  CHECK(csv.find("type5_3rd") != std::string::npos);
  CHECK(csv.find("average") != std::string::npos);
  // one header + six type rows + one average row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);

  const std::string matrix_csv = jaccard_matrix_csv(report.jaccard);
  CHECK(matrix_csv.find("type,type1,type2,type3,type4,type5_1st,type5_3rd") == 0);
  CHECK(std::count(matrix_csv.begin(), matrix_csv.end(), '\n') == 7);
}
