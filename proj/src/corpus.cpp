#include "padben/corpus.hpp"

#include <nlohmann/json.hpp>

#include "padben/error.hpp"
#include "padben/jsonl.hpp"
#include "padben/textutil.hpp"

namespace padben {

int source_priority(Source s) {
  switch (s) {
    case Source::paws: return 0;
    case Source::mrpc: return 1;
    case Source::hlpc: return 2;
  }
  return 3;
}

std::string to_string(Source s) {
  switch (s) {
    case Source::paws: return "paws";
    case Source::mrpc: return "mrpc";
    case Source::hlpc: return "hlpc";
  }
  return "?";
}

Source source_from_string(const std::string& name) {
  if (name == "paws" || name == "PAWS") return Source::paws;
  if (name == "mrpc" || name == "MRPC") return Source::mrpc;
  if (name == "hlpc" || name == "HLPC") return Source::hlpc;
  raise(ErrorCode::invalid_argument, "unknown source: " + name);
}

std::string to_string(TextType t) {
  switch (t) {
    case TextType::type1: return "type1";
    case TextType::type2: return "type2";
    case TextType::type3: return "type3";
    case TextType::type4: return "type4";
    case TextType::type5_1st: return "type5_1st";
    case TextType::type5_3rd: return "type5_3rd";
  }
  return "?";
}

TextType text_type_from_string(const std::string& name) {
  for (int i = 0; i < kNumTextTypes; ++i) {
    auto t = static_cast<TextType>(i);
    if (to_string(t) == name) return t;
  }
  raise(ErrorCode::invalid_argument, "unknown text type: " + name);
}

const std::string* field_of(const SentenceGroup& g, TextType t) {
  switch (t) {
    case TextType::type1: return &g.type1;
    case TextType::type3: return &g.type3;
    case TextType::type2: return g.type2 ? &*g.type2 : nullptr;
    case TextType::type4: return g.type4 ? &*g.type4 : nullptr;
    case TextType::type5_1st: return g.type5_1st ? &*g.type5_1st : nullptr;
    case TextType::type5_3rd: return g.type5_3rd ? &*g.type5_3rd : nullptr;
  }
  return nullptr;
}

namespace {

std::string require_string(const nlohmann::json& doc, const char* key, const std::string& path,
                           std::size_t line_no) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": missing or non-string field '" +
                                key + "'");
  }
  return it->get<std::string>();
}

int read_label(const nlohmann::json& doc, const std::string& path, std::size_t line_no) {
  auto it = doc.find("label");
  if (it == doc.end()) {
    raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": missing field 'label'");
  }
  int label;
  if (it->is_number_integer()) {
    label = it->get<int>();
  } else if (it->is_string()) {
    const std::string& s = it->get_ref<const std::string&>();
    if (s == "0") label = 0;
    else if (s == "1") label = 1;
    else raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
  } else {
    raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
  }
  if (label != 0 && label != 1) {
    raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
  }
  return label;
}

}  // namespace

std::vector<RawPairRecord> ingest_pairs(const std::string& path, Source source) {
  std::vector<RawPairRecord> records;
  for_each_jsonl(path, [&](const nlohmann::json& doc, std::size_t line_no) {
    RawPairRecord rec;
    rec.source = source;
    if (source == Source::hlpc) {
      // HLPC: only the two original-sentence fields are used; every kept row
      // is a verified human paraphrase pair.
      rec.sentence1 = require_string(doc, "originalSentence1", path, line_no);
      rec.sentence2 = require_string(doc, "originalSentence2", path, line_no);
      rec.pair_label = 1;
    } else {
      rec.sentence1 = require_string(doc, "sentence1", path, line_no);
      rec.sentence2 = require_string(doc, "sentence2", path, line_no);
      rec.pair_label = read_label(doc, path, line_no);
    }
    if (trim(rec.sentence1).empty() || trim(rec.sentence2).empty()) {
      raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": empty sentence");
    }
    if (rec.pair_label == 1) records.push_back(std::move(rec));
  });
  if (records.empty()) raise(ErrorCode::parse, path + ": no valid pairs");
  return records;
}

std::vector<RawPairRecord> quality_filter(const std::vector<RawPairRecord>& records) {
  std::vector<RawPairRecord> kept;
  kept.reserve(records.size());
  for (const auto& rec : records) {
    auto ok = [](const std::string& s) {
      std::size_t n = utf8_length(s);
      return n >= kMinTextChars && n <= kMaxTextChars && is_valid_utf8(s);
    };
    if (ok(rec.sentence1) && ok(rec.sentence2)) kept.push_back(rec);
  }
  return kept;
}

std::vector<SentenceGroup> standardize(const std::vector<RawPairRecord>& records,
                                       std::int64_t first_id) {
  std::vector<SentenceGroup> groups;
  groups.reserve(records.size());
  std::int64_t id = first_id;
  for (const auto& rec : records) {
    SentenceGroup g;
    g.group_id = id++;
    g.source = rec.source;
    g.type1 = rec.sentence1;
    g.type3 = rec.sentence2;
    groups.push_back(std::move(g));
  }
  return groups;
}

nlohmann::json group_to_json(const SentenceGroup& g) {
  nlohmann::json doc;
  doc["group_id"] = g.group_id;
  doc["source"] = to_string(g.source);
  doc["type1"] = g.type1;
  doc["type3"] = g.type3;
  if (g.type2) doc["type2"] = *g.type2;
  if (g.type4) doc["type4"] = *g.type4;
  if (g.type5_1st) doc["type5_1st"] = *g.type5_1st;
  if (g.type5_3rd) doc["type5_3rd"] = *g.type5_3rd;

  auto meta_json = [](const FieldMeta& m) {
    return nlohmann::json{{"provider", m.provider_id}, {"length_flag", m.length_flag}, {"retries", m.retries}};
  };
  nlohmann::json meta;
  if (g.type2_meta) meta["type2"] = meta_json(*g.type2_meta);
  if (g.type4_meta) meta["type4"] = meta_json(*g.type4_meta);
  if (g.type5_meta) {
    meta["type5"] = nlohmann::json{{"iterations", g.type5_meta->iterations},
                                   {"temperatures", g.type5_meta->temperatures},
                                   {"stop_reason", g.type5_meta->stop_reason},
                                   {"length_flags", g.type5_meta->length_flags},
                                   {"provider", g.type5_meta->provider_id}};
  }
  if (!meta.empty()) doc["meta"] = std::move(meta);
  return doc;
}

SentenceGroup group_from_json(const nlohmann::json& doc) {
  SentenceGroup g;
  g.group_id = doc.at("group_id").get<std::int64_t>();
  g.source = source_from_string(doc.at("source").get<std::string>());
  g.type1 = doc.at("type1").get<std::string>();
  g.type3 = doc.at("type3").get<std::string>();
  if (doc.contains("type2")) g.type2 = doc["type2"].get<std::string>();
  if (doc.contains("type4")) g.type4 = doc["type4"].get<std::string>();
  if (doc.contains("type5_1st")) g.type5_1st = doc["type5_1st"].get<std::string>();
  if (doc.contains("type5_3rd")) g.type5_3rd = doc["type5_3rd"].get<std::string>();
  if (doc.contains("meta")) {
    const auto& meta = doc["meta"];
    auto meta_from = [](const nlohmann::json& m) {
      FieldMeta fm;
      fm.provider_id = m.value("provider", "");
      fm.length_flag = m.value("length_flag", false);
      fm.retries = m.value("retries", 0);
      return fm;
    };
    if (meta.contains("type2")) g.type2_meta = meta_from(meta["type2"]);
    if (meta.contains("type4")) g.type4_meta = meta_from(meta["type4"]);
    if (meta.contains("type5")) {
      Type5Meta tm;
      const auto& m = meta["type5"];
      tm.iterations = m.value("iterations", std::vector<std::string>{});
      tm.temperatures = m.value("temperatures", std::vector<double>{});
      tm.stop_reason = m.value("stop_reason", "");
      tm.length_flags = m.value("length_flags", std::vector<bool>{});
      tm.provider_id = m.value("provider", "");
      g.type5_meta = std::move(tm);
    }
  }
  return g;
}

std::vector<SentenceGroup> read_groups(const std::string& path) {
  std::vector<SentenceGroup> groups;
  for_each_jsonl(path, [&](const nlohmann::json& doc, std::size_t) {
    groups.push_back(group_from_json(doc));
  });
  return groups;
}

void write_groups(const std::string& path, const std::vector<SentenceGroup>& groups) {
  std::vector<nlohmann::json> rows;
  rows.reserve(groups.size());
  for (const auto& g : groups) rows.push_back(group_to_json(g));
  write_jsonl(path, rows);
}

}  // namespace padben
