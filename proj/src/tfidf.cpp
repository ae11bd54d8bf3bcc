#include "padben/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "padben/error.hpp"
#include "padben/textutil.hpp"

namespace padben {

TfidfMatrix tfidf_vectors(const std::vector<std::string>& texts) {
  if (texts.empty()) raise(ErrorCode::invalid_argument, "tfidf_vectors: empty text list");

  // std::map keeps the vocabulary in lexicographic order, making the matrix
  // layout deterministic.
  std::map<std::string, std::uint32_t> vocab;
  std::vector<std::vector<std::string>> tokenized(texts.size());
  std::vector<std::uint32_t> df;

  for (std::size_t i = 0; i < texts.size(); ++i) tokenized[i] = word_tokens(texts[i]);
  for (const auto& toks : tokenized) {
    for (const auto& t : toks) vocab.emplace(t, 0);
  }
  if (vocab.empty()) raise(ErrorCode::degenerate, "tfidf_vectors: all-empty vocabulary");

  TfidfMatrix m;
  m.vocabulary.reserve(vocab.size());
  std::uint32_t next = 0;
  for (auto& [term, idx] : vocab) {
    idx = next++;
    m.vocabulary.push_back(term);
  }

  df.assign(vocab.size(), 0);
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> counts(texts.size());
  for (std::size_t i = 0; i < tokenized.size(); ++i) {
    for (const auto& t : tokenized[i]) ++counts[i][vocab[t]];
    for (const auto& [idx, c] : counts[i]) ++df[idx];
  }

  const double n_docs = static_cast<double>(texts.size());
  std::vector<double> idf(vocab.size());
  for (std::size_t j = 0; j < idf.size(); ++j) {
    idf[j] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[j]))) + 1.0;
  }

  m.rows.resize(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto& row = m.rows[i];
    row.entries.reserve(counts[i].size());
    for (const auto& [idx, c] : counts[i]) {
      row.entries.emplace_back(idx, static_cast<double>(c) * idf[idx]);
    }
    std::sort(row.entries.begin(), row.entries.end());
    double sq = 0.0;
    for (const auto& [idx, w] : row.entries) sq += w * w;
    row.norm = std::sqrt(sq);
  }
  return m;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    if (a.entries[i].first == b.entries[j].first) {
      dot += a.entries[i].second * b.entries[j].second;
      ++i;
      ++j;
    } else if (a.entries[i].first < b.entries[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return dot / (a.norm * b.norm);
}

std::unordered_map<std::string, double> idf_table(const std::vector<std::string>& texts) {
  std::unordered_map<std::string, std::uint32_t> df;
  for (const auto& text : texts) {
    auto toks = word_tokens(text);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (const auto& t : toks) ++df[t];
  }
  const double n_docs = static_cast<double>(texts.size());
  std::unordered_map<std::string, double> idf;
  idf.reserve(df.size());
  for (const auto& [term, d] : df) {
    idf[term] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(d))) + 1.0;
  }
  return idf;
}

std::vector<SentenceGroup> dedup(const std::vector<SentenceGroup>& groups, const DedupConfig& cfg) {
  if (groups.empty()) raise(ErrorCode::invalid_argument, "dedup: empty group list");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) {
    raise(ErrorCode::invalid_argument, "dedup: theta must be in (0,1]");
  }
  if (cfg.priority.size() != 3) {
    raise(ErrorCode::invalid_argument, "dedup: priority must order all three sources");
  }

  std::vector<std::string> texts;
  texts.reserve(groups.size());
  for (const auto& g : groups) texts.push_back(g.type1);
  TfidfMatrix m = tfidf_vectors(texts);

  auto rank_of = [&](Source s) {
    for (std::size_t r = 0; r < cfg.priority.size(); ++r) {
      if (cfg.priority[r] == s) return static_cast<int>(r);
    }
    raise(ErrorCode::invalid_argument, "dedup: priority does not cover source " + to_string(s));
  };
  auto better = [&](std::size_t a, std::size_t b) {
    int pa = rank_of(groups[a].source);
    int pb = rank_of(groups[b].source);
    if (pa != pb) return pa < pb;
    return groups[a].group_id < groups[b].group_id;
  };

  std::vector<bool> removed(groups.size(), false);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      if (cosine_similarity(m.rows[i], m.rows[j]) > cfg.theta) {
        removed[better(i, j) ? j : i] = true;
      }
    }
  }

  std::vector<SentenceGroup> survivors;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!removed[i]) survivors.push_back(groups[i]);
  }
  return survivors;
}

}  // namespace padben
