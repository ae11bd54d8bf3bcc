#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "padben/corpus.hpp"
#include "padben/gateway.hpp"
#include "padben/provider.hpp"

namespace padben {

// Knobs for Type 2/4/5 generation.
struct GenControls {
  double prefix_ratio = 0.20;       // fraction of tokens used as completion seed
  double len_tol_type2 = 0.20;      // +-20%
  double len_tol_type4 = 0.30;      // +-30%
  double len_tol_type5 = 0.40;      // +-40%, cumulative against the Type 2 text
  double base_temperature = 0.8;
  double temp_increment = 0.10;     // added per Type 5 iteration
  double convergence_sim = 0.95;    // early stop when consecutive outputs exceed this
  int max_paraphrase_retries = 3;
};

// Ordered, duplicate-free salient keywords.
class KeywordExtractor {
 public:
  virtual ~KeywordExtractor() = default;
  virtual std::vector<std::string> extract(const std::string& text) const = 0;
};

// Deterministic heuristic: capitalized multi-token spans first (in text
// order, dropping spans that are only stopwords), then stopword-filtered
// content tokens ranked by corpus IDF (rarest first, ties by first
// occurrence). At most `max_keywords` results.
class HeuristicKeywordExtractor : public KeywordExtractor {
 public:
  explicit HeuristicKeywordExtractor(std::unordered_map<std::string, double> corpus_idf = {},
                                     std::size_t max_keywords = 5);
  std::vector<std::string> extract(const std::string& text) const override;

 private:
  std::unordered_map<std::string, double> idf_;
  std::size_t max_keywords_;
};

// First ceil(ratio * token_count) whitespace tokens, minimum one, rejoined
// with single spaces.
std::string extract_prefix(const std::string& text, double prefix_ratio);

// Similarity used for Type 5 convergence detection: Jaccard over character
// trigram sets.
double convergence_similarity(const std::string& a, const std::string& b);

struct GenResult {
  std::string text;
  FieldMeta meta;
};

// Builds the sentence-completion prompt from group.type1 (prefix, target
// length = |type1| characters, max = (1+tol)*|type1|, keywords), generates,
// strips wrapper scaffolding and retries while the output is outside the
// +-20% length window. Out-of-tolerance survivors are flagged, never dropped.
GenResult generate_type2(const SentenceGroup& group, const GenControls& controls,
                         Gateway& gateway, Provider& provider, const KeywordExtractor& keywords,
                         std::uint64_t run_seed = 0);

// Applies the paraphrase prompt at base temperature with the +-30% window.
// The provider is chosen from the pool round-robin by group_id.
GenResult generate_type4(const std::string& text, std::int64_t group_id,
                         const GenControls& controls, Gateway& gateway,
                         const std::vector<ProviderPtr>& provider_pool,
                         std::uint64_t run_seed = 0);

struct Type5Chain {
  std::vector<std::string> iterations;  // output of each completed iteration
  std::vector<double> temperatures;     // temperature used per iteration
  std::vector<bool> length_flags;       // per-iteration +-40% check vs the source text
  std::string stop_reason;              // "converged" | "depth_reached" | "error"
  std::string provider_id;
  std::string error;                    // provider failure mid-chain, if any
};

// Iterative paraphrasing of a Type 2 text. Iteration k runs at temperature
// base + increment*(k-1); from the second iteration on, the chain stops early
// when consecutive outputs exceed the convergence similarity. Length
// tolerance is cumulative: every iteration is checked against the original
// Type 2 length at +-40%.
Type5Chain iterate_type5(const std::string& type2_text, int depth, std::int64_t group_id,
                         const GenControls& controls, Gateway& gateway,
                         const std::vector<ProviderPtr>& provider_pool,
                         std::uint64_t run_seed = 0);

// Fills the selected taxonomy fields for every group (parallel across groups,
// bounded by the gateway's max_inflight). Keyword IDF comes from the groups'
// type1 corpus.
struct GenerationSummary {
  std::size_t groups = 0;
  std::size_t length_flagged = 0;  // texts kept but outside tolerance
  std::size_t errors = 0;
};

// Which text types to produce (subset of {2, 4, 5}) and, for Type 5, which
// iteration depths to record (subset of {1, 3}). Type 5 requires a Type 2
// text: either 2 is selected too or the groups already carry one.
struct GenSelection {
  std::vector<int> types{2, 4, 5};
  std::vector<int> depths{1, 3};
};

GenerationSummary generate_all(std::vector<SentenceGroup>& groups, const GenControls& controls,
                               Gateway& gateway, Provider& generator,
                               const std::vector<ProviderPtr>& paraphraser_pool,
                               std::uint64_t run_seed, const GenSelection& selection = {});

}  // namespace padben
