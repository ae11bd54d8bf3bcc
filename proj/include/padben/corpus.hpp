#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace padben {

enum class Source { paws, mrpc, hlpc };

// Deduplication keeps the record from the source that ranks first here.
int source_priority(Source s);  // 0 = highest (paws)
std::string to_string(Source s);
Source source_from_string(const std::string& name);

struct RawPairRecord {
  Source source = Source::paws;
  std::string sentence1;
  std::string sentence2;
  int pair_label = 1;

  bool operator==(const RawPairRecord&) const = default;
};

// Per-field generation metadata attached by the taxonomy stage.
struct FieldMeta {
  std::string provider_id;
  bool length_flag = false;  // final text outside the length tolerance
  int retries = 0;
};

struct Type5Meta {
  std::vector<std::string> iterations;  // text after each iteration, in order
  std::vector<double> temperatures;
  std::string stop_reason;  // "converged" | "depth_reached" | "error"
  std::vector<bool> length_flags;
  std::string provider_id;
};

// One source sentence with its taxonomy variants. type1/type3 come from
// ingestion; the rest are filled by generation.
struct SentenceGroup {
  std::int64_t group_id = 0;
  Source source = Source::paws;
  std::string type1;
  std::string type3;
  std::optional<std::string> type2;
  std::optional<std::string> type4;
  std::optional<std::string> type5_1st;
  std::optional<std::string> type5_3rd;

  std::optional<FieldMeta> type2_meta;
  std::optional<FieldMeta> type4_meta;
  std::optional<Type5Meta> type5_meta;
};

// Canonical text-type order used by QA matrices and task specs.
enum class TextType { type1, type2, type3, type4, type5_1st, type5_3rd };
inline constexpr int kNumTextTypes = 6;
std::string to_string(TextType t);
TextType text_type_from_string(const std::string& name);

// Returns the field for `t`, or nullptr when not yet generated.
const std::string* field_of(const SentenceGroup& g, TextType t);

// Reads a line-delimited record file with the per-source field adapter and
// keeps only verified paraphrase pairs (label == 1), preserving file order.
//   paws / mrpc: {"sentence1","sentence2","label"}
//   hlpc:        {"originalSentence1","originalSentence2"} (pairs by construction)
// Raises parse errors with the offending line number, and "no valid pairs"
// when nothing survives the label filter.
std::vector<RawPairRecord> ingest_pairs(const std::string& path, Source source);

// Drops records whose sentences are shorter than 10 or longer than 1000
// characters, or which are not valid UTF-8. Order preserved; idempotent.
std::vector<RawPairRecord> quality_filter(const std::vector<RawPairRecord>& records);

inline constexpr std::size_t kMinTextChars = 10;
inline constexpr std::size_t kMaxTextChars = 1000;

// RawPairRecord -> SentenceGroup with sequential ids starting at first_id.
// Text bytes are carried over verbatim.
std::vector<SentenceGroup> standardize(const std::vector<RawPairRecord>& records,
                                       std::int64_t first_id = 0);

nlohmann::json group_to_json(const SentenceGroup& g);
SentenceGroup group_from_json(const nlohmann::json& doc);

std::vector<SentenceGroup> read_groups(const std::string& path);
void write_groups(const std::string& path, const std::vector<SentenceGroup>& groups);

}  // namespace padben
