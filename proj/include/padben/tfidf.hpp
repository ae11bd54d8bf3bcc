#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "padben/corpus.hpp"

namespace padben {

// Sparse TF-IDF row: term index -> weight, plus the L2 norm.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;  // sorted by term index
  double norm = 0.0;
};

struct TfidfMatrix {
  std::vector<std::string> vocabulary;  // index -> term
  std::vector<SparseVector> rows;       // one per input text
};

// TF-IDF with raw term counts and smoothed IDF ln((1+N)/(1+df)) + 1.
// Tokenization: lowercase, split on non-alphanumeric runs, no stemming.
// Raises on an all-empty vocabulary.
TfidfMatrix tfidf_vectors(const std::vector<std::string>& texts);

// Cosine similarity of two rows; 0 when either has zero norm.
double cosine_similarity(const SparseVector& a, const SparseVector& b);

// Corpus-level IDF table for the keyword extractor: term -> idf with the same
// smoothed form as tfidf_vectors.
std::unordered_map<std::string, double> idf_table(const std::vector<std::string>& texts);

struct DedupConfig {
  double theta = 0.85;  // strictly-greater similarity triggers removal
  // Total order over sources; earlier entries win conflicts.
  std::vector<Source> priority{Source::paws, Source::mrpc, Source::hlpc};
};

// Near-duplicate removal over the groups' type1 texts (Alg. pairwise
// marking): a group is dropped iff some strictly higher-priority group is
// more similar than theta, where priority is source rank (PAWS > MRPC >
// HLPC) and, within a source, the lower group_id. The comparison set is all
// groups, not just survivors, so duplicate chains collapse to their single
// best representative.
std::vector<SentenceGroup> dedup(const std::vector<SentenceGroup>& groups, const DedupConfig& cfg);

}  // namespace padben
