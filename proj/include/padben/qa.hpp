#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "padben/corpus.hpp"
#include "padben/gateway.hpp"
#include "padben/provider.hpp"

namespace padben {

// Jaccard similarity over lowercased word token sets; two empty texts are 1.0
// by convention.
double jaccard(const std::string& a, const std::string& b);

using JaccardMatrix = std::array<std::array<double, kNumTextTypes>, kNumTextTypes>;

// Entry (i,j) is the mean over groups of jaccard(type_i, type_j). Requires
// every type field populated; symmetric with unit diagonal.
JaccardMatrix jaccard_matrix(const std::vector<SentenceGroup>& groups);

// exp(-mean(logprob)) over the scored positions of `text` under `scorer`.
double perplexity(const std::string& text, Gateway& gateway, Provider& scorer);

// Mean over texts of BLEU(text | all other texts), n-grams up to max_n with
// uniform weights and brevity penalty. Zero clipped-match counts are smoothed
// add-one: p_n = 1/(total_n + 1). The effective order is min(max_n, candidate
// length). Requires corpus size >= 2.
double self_bleu(const std::vector<std::string>& corpus, int max_n = 4);

// BLEU of one candidate against explicit references, same conventions.
double bleu(const std::vector<std::string>& candidate_tokens,
            const std::vector<std::vector<std::string>>& reference_tokens, int max_n = 4);

struct QualityReport {
  JaccardMatrix jaccard;
  // scorer id -> per-type perplexity, type order = TextType.
  std::map<std::string, std::array<double, kNumTextTypes>> perplexity;
  std::array<double, kNumTextTypes> self_bleu{};
};

QualityReport quality_report(const std::vector<SentenceGroup>& groups, Gateway& gateway,
                             const std::vector<ProviderPtr>& scorers);

// CSV with one row per text type, perplexity columns per scorer, a self-BLEU
// column, and a trailing average row.
std::string quality_report_csv(const QualityReport& report);

// 6x6 matrix CSV with type labels on both axes.
std::string jaccard_matrix_csv(const JaccardMatrix& m);

}  // namespace padben
