#include "padben/qa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "padben/error.hpp"
#include "padben/textutil.hpp"

namespace padben {

double jaccard(const std::string& a, const std::string& b) { return jaccard_tokens(a, b); }

JaccardMatrix jaccard_matrix(const std::vector<SentenceGroup>& groups) {
  if (groups.empty()) raise(ErrorCode::invalid_argument, "jaccard_matrix: no groups");
  for (const auto& g : groups) {
    for (int t = 0; t < kNumTextTypes; ++t) {
      if (!field_of(g, static_cast<TextType>(t))) {
        raise(ErrorCode::invalid_argument, "jaccard_matrix: group " + std::to_string(g.group_id) +
                                               " missing " + to_string(static_cast<TextType>(t)));
      }
    }
  }
  JaccardMatrix m{};
  for (int i = 0; i < kNumTextTypes; ++i) {
    for (int j = i; j < kNumTextTypes; ++j) {
      double sum = 0.0;
      for (const auto& g : groups) {
        sum += jaccard(*field_of(g, static_cast<TextType>(i)), *field_of(g, static_cast<TextType>(j)));
      }
      const double mean = sum / static_cast<double>(groups.size());
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = mean;
      m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = mean;
    }
  }
  return m;
}

double perplexity(const std::string& text, Gateway& gateway, Provider& scorer) {
  TokenScoreList scores = gateway.score_tokens(scorer, text);
  if (scores.scores.empty()) raise(ErrorCode::degenerate, "perplexity: empty score list");
  double sum = 0.0;
  for (const auto& s : scores.scores) sum += s.logprob;
  return std::exp(-sum / static_cast<double>(scores.scores.size()));
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngram_counts(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::vector<std::string> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                  tokens.begin() + static_cast<std::ptrdiff_t>(i) + n);
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

double bleu(const std::vector<std::string>& candidate,
            const std::vector<std::vector<std::string>>& references, int max_n) {
  if (candidate.empty() || references.empty()) {
    raise(ErrorCode::invalid_argument, "bleu: empty candidate or reference set");
  }
  const int order = std::min<int>(max_n, static_cast<int>(candidate.size()));

  double log_precision_sum = 0.0;
  for (int n = 1; n <= order; ++n) {
    NgramCounts cand = ngram_counts(candidate, n);
    std::size_t total = 0, matched = 0;
    for (const auto& [gram, count] : cand) total += count;
    for (const auto& [gram, count] : cand) {
      std::size_t best_ref = 0;
      for (const auto& ref : references) {
        NgramCounts rc = ngram_counts(ref, n);
        if (auto it = rc.find(gram); it != rc.end()) best_ref = std::max(best_ref, it->second);
      }
      matched += std::min(count, best_ref);
    }
    const double p = matched == 0 ? 1.0 / static_cast<double>(total + 1)
                                  : static_cast<double>(matched) / static_cast<double>(total);
    log_precision_sum += std::log(p);
  }
  const double geo_mean = std::exp(log_precision_sum / static_cast<double>(order));

  // Brevity penalty against the closest reference length (ties -> shorter).
  const auto c_len = static_cast<double>(candidate.size());
  double best_r = static_cast<double>(references.front().size());
  for (const auto& ref : references) {
    const auto r = static_cast<double>(ref.size());
    const double d_new = std::abs(r - c_len), d_old = std::abs(best_r - c_len);
    if (d_new < d_old || (d_new == d_old && r < best_r)) best_r = r;
  }
  const double bp = c_len >= best_r ? 1.0 : std::exp(1.0 - best_r / c_len);
  return bp * geo_mean;
}

double self_bleu(const std::vector<std::string>& corpus, int max_n) {
  if (corpus.size() < 2) raise(ErrorCode::invalid_argument, "self_bleu: corpus size must be >= 2");
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(corpus.size());
  for (const auto& text : corpus) tokenized.push_back(word_tokens(text));

  double sum = 0.0;
  for (std::size_t i = 0; i < tokenized.size(); ++i) {
    std::vector<std::vector<std::string>> refs;
    refs.reserve(tokenized.size() - 1);
    for (std::size_t j = 0; j < tokenized.size(); ++j) {
      if (j != i) refs.push_back(tokenized[j]);
    }
    sum += bleu(tokenized[i], refs, max_n);
  }
  return sum / static_cast<double>(corpus.size());
}

QualityReport quality_report(const std::vector<SentenceGroup>& groups, Gateway& gateway,
                             const std::vector<ProviderPtr>& scorers) {
  QualityReport report;
  report.jaccard = jaccard_matrix(groups);

  std::array<std::vector<std::string>, kNumTextTypes> by_type;
  for (const auto& g : groups) {
    for (int t = 0; t < kNumTextTypes; ++t) {
      by_type[static_cast<std::size_t>(t)].push_back(*field_of(g, static_cast<TextType>(t)));
    }
  }

  for (const auto& scorer : scorers) {
    std::array<double, kNumTextTypes> ppl{};
    for (int t = 0; t < kNumTextTypes; ++t) {
      const auto& texts = by_type[static_cast<std::size_t>(t)];
      auto values = parallel_map<double>(texts.size(), gateway.config().max_inflight,
                                         [&](std::size_t i) {
                                           return perplexity(texts[i], gateway, *scorer);
                                         });
      double sum = 0.0;
      for (double v : values) sum += v;
      ppl[static_cast<std::size_t>(t)] = sum / static_cast<double>(values.size());
    }
    report.perplexity[scorer->id()] = ppl;
  }

  for (int t = 0; t < kNumTextTypes; ++t) {
    report.self_bleu[static_cast<std::size_t>(t)] = self_bleu(by_type[static_cast<std::size_t>(t)]);
  }
  return report;
}

std::string quality_report_csv(const QualityReport& report) {
  std::ostringstream out;
  out << "text_type";
  for (const auto& [scorer, ppl] : report.perplexity) out << ",ppl_" << scorer;
  out << ",self_bleu\n";
  auto row = [&](const std::string& label, int t) {
    out << label;
    for (const auto& [scorer, ppl] : report.perplexity) out << ',' << ppl[static_cast<std::size_t>(t)];
    out << ',' << report.self_bleu[static_cast<std::size_t>(t)] << '\n';
  };
  for (int t = 0; t < kNumTextTypes; ++t) row(to_string(static_cast<TextType>(t)), t);
  out << "average";
  for (const auto& [scorer, ppl] : report.perplexity) {
    double sum = 0.0;
    for (double v : ppl) sum += v;
    out << ',' << sum / kNumTextTypes;
  }
  double sb = 0.0;
  for (double v : report.self_bleu) sb += v;
  out << ',' << sb / kNumTextTypes << '\n';
  return out.str();
}

std::string jaccard_matrix_csv(const JaccardMatrix& m) {
  std::ostringstream out;
  out << "type";
  for (int t = 0; t < kNumTextTypes; ++t) out << ',' << to_string(static_cast<TextType>(t));
  out << '\n';
  for (int i = 0; i < kNumTextTypes; ++i) {
    out << to_string(static_cast<TextType>(i));
    for (int j = 0; j < kNumTextTypes; ++j) {
      out << ',' << m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace padben
