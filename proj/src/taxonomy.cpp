#include "padben/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "padben/error.hpp"
#include "padben/prompts.hpp"
#include "padben/rng.hpp"
#include "padben/textutil.hpp"
#include "padben/tfidf.hpp"

namespace padben {

namespace {

// Strips leading/trailing non-alphanumeric characters.
std::string strip_punct(const std::string& token) {
  std::size_t b = 0, e = token.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
  return token.substr(b, e - b);
}

bool starts_uppercase(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isalpha(c)) return std::isupper(c) != 0;
    if (c >= 0x80) return false;
  }
  return false;
}

bool within_tolerance(std::size_t length, std::size_t target, double tol) {
  const double lo = (1.0 - tol) * static_cast<double>(target);
  const double hi = (1.0 + tol) * static_cast<double>(target);
  const double len = static_cast<double>(length);
  return len >= lo && len <= hi;
}

}  // namespace

HeuristicKeywordExtractor::HeuristicKeywordExtractor(std::unordered_map<std::string, double> corpus_idf,
                                                     std::size_t max_keywords)
    : idf_(std::move(corpus_idf)), max_keywords_(max_keywords) {}

std::vector<std::string> HeuristicKeywordExtractor::extract(const std::string& text) const {
  if (trim(text).empty()) raise(ErrorCode::invalid_argument, "extract: empty text");

  std::vector<std::string> keywords;
  std::vector<std::string> covered;  // lowercased tokens already used by spans

  auto push_unique = [&](const std::string& kw) {
    if (std::find(keywords.begin(), keywords.end(), kw) == keywords.end()) keywords.push_back(kw);
  };

  // Pass 1: capitalized spans (consecutive capitalized tokens), text order.
  auto tokens = ws_tokens(text);
  std::vector<std::string> span;
  auto flush_span = [&] {
    if (span.empty()) return;
    // Trim stopwords off the edges; drop spans that are stopwords only.
    std::size_t b = 0, e = span.size();
    while (b < e && is_stopword(to_lower_ascii(span[b]))) ++b;
    while (e > b && is_stopword(to_lower_ascii(span[e - 1]))) --e;
    if (b < e) {
      std::vector<std::string> kept(span.begin() + static_cast<std::ptrdiff_t>(b),
                                    span.begin() + static_cast<std::ptrdiff_t>(e));
      push_unique(join(kept, " "));
      for (const auto& t : kept) covered.push_back(to_lower_ascii(t));
    }
    span.clear();
  };
  for (const auto& raw : tokens) {
    std::string t = strip_punct(raw);
    if (!t.empty() && starts_uppercase(t)) {
      span.push_back(t);
    } else {
      flush_span();
    }
  }
  flush_span();

  // Pass 2: content tokens by corpus IDF, rarest first, first occurrence on
  // ties. Unknown tokens rank above known ones (a term the corpus has never
  // seen is maximally informative).
  std::vector<std::pair<double, std::size_t>> ranked;  // (-idf, first position)
  std::vector<std::string> content;
  auto words = word_tokens(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (is_stopword(w)) continue;
    if (std::find(covered.begin(), covered.end(), w) != covered.end()) continue;
    if (std::find(content.begin(), content.end(), w) != content.end()) continue;
    double idf = std::numeric_limits<double>::infinity();
    if (auto it = idf_.find(w); it != idf_.end()) idf = it->second;
    ranked.emplace_back(-idf, content.size());
    content.push_back(w);
  }
  std::stable_sort(ranked.begin(), ranked.end());
  for (const auto& [neg_idf, pos] : ranked) {
    if (keywords.size() >= max_keywords_) break;
    push_unique(content[pos]);
  }
  if (keywords.size() > max_keywords_) keywords.resize(max_keywords_);
  return keywords;
}

std::string extract_prefix(const std::string& text, double prefix_ratio) {
  auto tokens = ws_tokens(text);
  if (tokens.empty()) raise(ErrorCode::invalid_argument, "extract_prefix: empty text");
  auto count = static_cast<std::size_t>(
      std::ceil(prefix_ratio * static_cast<double>(tokens.size())));
  if (count < 1) count = 1;
  if (count > tokens.size()) count = tokens.size();
  tokens.resize(count);
  return join(tokens, " ");
}

double convergence_similarity(const std::string& a, const std::string& b) {
  return trigram_similarity(a, b);
}

GenResult generate_type2(const SentenceGroup& group, const GenControls& controls, Gateway& gateway,
                         Provider& provider, const KeywordExtractor& keywords,
                         std::uint64_t run_seed) {
  const std::string& source = group.type1;
  const std::size_t target = utf8_length(source);
  const auto max_length = static_cast<std::size_t>(
      std::floor((1.0 + controls.len_tol_type2) * static_cast<double>(target)));
  const std::string prefix = extract_prefix(source, controls.prefix_ratio);
  const std::string prompt = completion_prompt(prefix, target, max_length, keywords.extract(source));

  GenResult result;
  result.meta.provider_id = provider.id();
  GenerationRequest req;
  req.prompt = prompt;
  req.temperature = controls.base_temperature;
  req.max_tokens = static_cast<int>(max_length);

  for (int attempt = 0;; ++attempt) {
    req.seed = derive_stream(run_seed, {kStreamGeneration, 2,
                                        static_cast<std::uint64_t>(group.group_id),
                                        static_cast<std::uint64_t>(attempt)});
    result.text = strip_generation_wrappers(gateway.generate(provider, req));
    result.meta.retries = attempt;
    if (within_tolerance(utf8_length(result.text), target, controls.len_tol_type2)) {
      result.meta.length_flag = false;
      return result;
    }
    if (attempt >= controls.max_paraphrase_retries) {
      result.meta.length_flag = true;  // kept, flagged
      return result;
    }
  }
}

namespace {

GenResult paraphrase_once(const std::string& text, std::int64_t group_id, double temperature,
                          double tolerance, std::size_t reference_length, int max_retries,
                          Gateway& gateway, Provider& provider, std::uint64_t run_seed,
                          std::uint64_t stream_tag) {
  GenResult result;
  result.meta.provider_id = provider.id();
  GenerationRequest req;
  req.prompt = paraphrase_prompt(text);
  req.temperature = temperature;
  req.max_tokens = static_cast<int>(2 * reference_length + 64);

  for (int attempt = 0;; ++attempt) {
    req.seed = derive_stream(run_seed, {kStreamGeneration, stream_tag,
                                        static_cast<std::uint64_t>(group_id),
                                        static_cast<std::uint64_t>(attempt)});
    result.text = strip_generation_wrappers(gateway.generate(provider, req));
    result.meta.retries = attempt;
    if (within_tolerance(utf8_length(result.text), reference_length, tolerance)) {
      result.meta.length_flag = false;
      return result;
    }
    if (attempt >= max_retries) {
      result.meta.length_flag = true;
      return result;
    }
  }
}

}  // namespace

GenResult generate_type4(const std::string& text, std::int64_t group_id,
                         const GenControls& controls, Gateway& gateway,
                         const std::vector<ProviderPtr>& provider_pool, std::uint64_t run_seed) {
  if (text.empty()) raise(ErrorCode::invalid_argument, "generate_type4: empty text");
  if (provider_pool.empty()) raise(ErrorCode::invalid_argument, "generate_type4: empty provider pool");
  Provider& provider =
      *provider_pool[static_cast<std::size_t>(group_id) % provider_pool.size()];
  return paraphrase_once(text, group_id, controls.base_temperature, controls.len_tol_type4,
                         utf8_length(text), controls.max_paraphrase_retries, gateway, provider,
                         run_seed, /*stream_tag=*/4);
}

Type5Chain iterate_type5(const std::string& type2_text, int depth, std::int64_t group_id,
                         const GenControls& controls, Gateway& gateway,
                         const std::vector<ProviderPtr>& provider_pool, std::uint64_t run_seed) {
  if (type2_text.empty()) raise(ErrorCode::invalid_argument, "iterate_type5: empty text");
  if (depth != 1 && depth != 3) raise(ErrorCode::invalid_argument, "iterate_type5: depth must be 1 or 3");
  if (provider_pool.empty()) raise(ErrorCode::invalid_argument, "iterate_type5: empty provider pool");

  Provider& provider =
      *provider_pool[static_cast<std::size_t>(group_id) % provider_pool.size()];
  const std::size_t reference_length = utf8_length(type2_text);

  Type5Chain chain;
  chain.provider_id = provider.id();
  std::string current = type2_text;
  for (int k = 1; k <= depth; ++k) {
    const double temperature =
        controls.base_temperature + controls.temp_increment * static_cast<double>(k - 1);
    GenResult step;
    try {
      step = paraphrase_once(current, group_id, temperature, controls.len_tol_type5,
                             reference_length, controls.max_paraphrase_retries, gateway, provider,
                             run_seed, /*stream_tag=*/50 + static_cast<std::uint64_t>(k));
    } catch (const Error& e) {
      chain.stop_reason = "error";
      chain.error = e.what();
      return chain;  // partial chain
    }
    chain.iterations.push_back(step.text);
    chain.temperatures.push_back(temperature);
    chain.length_flags.push_back(step.meta.length_flag);
    // Convergence is checked between consecutive outputs, so the earliest
    // possible stop is after iteration 2.
    if (k >= 2 &&
        convergence_similarity(chain.iterations[static_cast<std::size_t>(k - 1)],
                               chain.iterations[static_cast<std::size_t>(k - 2)]) >
            controls.convergence_sim) {
      chain.stop_reason = "converged";
      return chain;
    }
    current = step.text;
  }
  chain.stop_reason = "depth_reached";
  return chain;
}

GenerationSummary generate_all(std::vector<SentenceGroup>& groups, const GenControls& controls,
                               Gateway& gateway, Provider& generator,
                               const std::vector<ProviderPtr>& paraphraser_pool,
                               std::uint64_t run_seed, const GenSelection& selection) {
  auto selected = [&](const std::vector<int>& values, int v) {
    return std::find(values.begin(), values.end(), v) != values.end();
  };
  const bool want2 = selected(selection.types, 2);
  const bool want4 = selected(selection.types, 4);
  const bool want5 = selected(selection.types, 5);
  const bool depth1 = selected(selection.depths, 1);
  const bool depth3 = selected(selection.depths, 3);
  if (want5 && !depth1 && !depth3) {
    raise(ErrorCode::invalid_argument, "generate: type 5 selected with no depth in {1,3}");
  }
  if (want5 && !want2) {
    for (const auto& g : groups) {
      if (!g.type2) {
        raise(ErrorCode::invalid_argument,
              "generate: type 5 needs a Type 2 text; select type 2 or supply groups that have one");
      }
    }
  }

  std::vector<std::string> type1_texts;
  type1_texts.reserve(groups.size());
  for (const auto& g : groups) type1_texts.push_back(g.type1);
  HeuristicKeywordExtractor keywords(idf_table(type1_texts));

  struct GroupOutput {
    GenResult type2;
    GenResult type4;
    Type5Chain chain;
  };
  auto outputs = parallel_map<GroupOutput>(
      groups.size(), gateway.config().max_inflight, [&](std::size_t i) {
        GroupOutput out;
        if (want2) {
          out.type2 = generate_type2(groups[i], controls, gateway, generator, keywords, run_seed);
        }
        if (want4) {
          out.type4 = generate_type4(groups[i].type1, groups[i].group_id, controls, gateway,
                                     paraphraser_pool, run_seed);
        }
        if (want5) {
          const std::string& seed_text = want2 ? out.type2.text : *groups[i].type2;
          out.chain = iterate_type5(seed_text, depth3 ? 3 : 1, groups[i].group_id, controls,
                                    gateway, paraphraser_pool, run_seed);
        }
        return out;
      });

  GenerationSummary summary;
  summary.groups = groups.size();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& g = groups[i];
    auto& out = outputs[i];
    if (want2) {
      g.type2 = out.type2.text;
      g.type2_meta = out.type2.meta;
      if (out.type2.meta.length_flag) ++summary.length_flagged;
    }
    if (want4) {
      g.type4 = out.type4.text;
      g.type4_meta = out.type4.meta;
      if (out.type4.meta.length_flag) ++summary.length_flagged;
    }
    if (!want5) continue;
    if (out.chain.stop_reason == "error" || out.chain.iterations.empty()) {
      ++summary.errors;
    } else {
      if (depth1) g.type5_1st = out.chain.iterations.front();
      if (depth3) g.type5_3rd = out.chain.iterations.back();
    }
    Type5Meta meta;
    meta.iterations = out.chain.iterations;
    meta.temperatures = out.chain.temperatures;
    meta.stop_reason = out.chain.stop_reason;
    meta.length_flags = out.chain.length_flags;
    meta.provider_id = out.chain.provider_id;
    g.type5_meta = std::move(meta);
    for (bool f : out.chain.length_flags) {
      if (f) ++summary.length_flagged;
    }
  }
  return summary;
}

}  // namespace padben
