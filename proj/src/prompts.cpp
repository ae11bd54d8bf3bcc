#include "padben/prompts.hpp"

#include <array>

#include "padben/error.hpp"
#include "padben/textutil.hpp"

namespace padben {

namespace {

constexpr const char* kCompletionHead = "Continue this text naturally and coherently:\n\n\"";
constexpr const char* kCompletionRequirements = "\"\n\nRequirements:\n";
constexpr const char* kParaphraseHead =
    "Please paraphrase the following text while maintaining its original meaning:\n\n";
constexpr const char* kParaphraseTail = "\n\nParaphrased text:";

bool parse_size_after(const std::string& s, const std::string& marker, std::size_t& out) {
  auto pos = s.find(marker);
  if (pos == std::string::npos) return false;
  pos += marker.size();
  std::size_t value = 0;
  bool any = false;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
    value = value * 10 + static_cast<std::size_t>(s[pos] - '0');
    ++pos;
    any = true;
  }
  out = value;
  return any;
}

}  // namespace

std::string completion_prompt(const std::string& sentence_prefix, std::size_t target_length,
                              std::size_t max_length, const std::vector<std::string>& keywords) {
  std::string prompt = kCompletionHead;
  prompt += sentence_prefix;
  prompt += kCompletionRequirements;
  prompt += "- Target length: ~" + std::to_string(target_length) + " characters total\n";
  prompt += "- Maximum length: " + std::to_string(max_length) + " characters\n";
  prompt += "- Keywords to include: " + join(keywords, ", ") + "\n";
  prompt += "- Write in a natural, fluent style\n\n";
  prompt += "Return ONLY the completed text with no labels, quotes, explanations, or alternatives.\n\n";
  prompt += "Completion:";
  return prompt;
}

std::string paraphrase_prompt(const std::string& text) {
  return std::string(kParaphraseHead) + text + kParaphraseTail;
}

std::optional<CompletionPromptParts> parse_completion_prompt(const std::string& prompt) {
  if (prompt.rfind(kCompletionHead, 0) != 0) return std::nullopt;
  auto req_pos = prompt.find(kCompletionRequirements);
  if (req_pos == std::string::npos) return std::nullopt;
  CompletionPromptParts parts;
  const std::size_t head_len = std::string(kCompletionHead).size();
  parts.prefix = prompt.substr(head_len, req_pos - head_len);
  if (!parse_size_after(prompt, "Target length: ~", parts.target_length)) return std::nullopt;
  if (!parse_size_after(prompt, "Maximum length: ", parts.max_length)) return std::nullopt;
  auto kw_pos = prompt.find("Keywords to include: ");
  if (kw_pos != std::string::npos) {
    kw_pos += std::string("Keywords to include: ").size();
    auto end = prompt.find('\n', kw_pos);
    std::string kw = prompt.substr(kw_pos, end - kw_pos);
    std::string current;
    for (std::size_t i = 0; i <= kw.size(); ++i) {
      if (i == kw.size() || (kw[i] == ',' && i + 1 < kw.size() && kw[i + 1] == ' ')) {
        if (!current.empty()) parts.keywords.push_back(trim(current));
        current.clear();
        if (i < kw.size()) ++i;  // skip the space after the comma
      } else {
        current.push_back(kw[i]);
      }
    }
  }
  return parts;
}

std::optional<std::string> parse_paraphrase_prompt(const std::string& prompt) {
  if (prompt.rfind(kParaphraseHead, 0) != 0) return std::nullopt;
  auto tail_pos = prompt.rfind(kParaphraseTail);
  if (tail_pos == std::string::npos) return std::nullopt;
  const std::size_t head_len = std::string(kParaphraseHead).size();
  if (tail_pos < head_len) return std::nullopt;
  return prompt.substr(head_len, tail_pos - head_len);
}

std::string strip_generation_wrappers(const std::string& text) {
  std::string out = trim(text);
  static const std::array<const char*, 4> kLabels = {"completion:", "paraphrased text:",
                                                     "generated sentence:", "output:"};
  bool changed = true;
  while (changed) {
    changed = false;
    std::string lower = to_lower_ascii(out);
    for (const char* label : kLabels) {
      if (lower.rfind(label, 0) == 0) {
        out = trim(out.substr(std::string(label).size()));
        changed = true;
        break;
      }
    }
  }
  if (out.size() >= 2) {
    char a = out.front(), b = out.back();
    if ((a == '"' && b == '"') || (a == '\'' && b == '\'')) {
      out = trim(out.substr(1, out.size() - 2));
    }
  }
  return out;
}

namespace {

// System personas for the single-sentence judges.
const char* single_persona(int task_id) {
  switch (task_id) {
    case 1:
      return "You are an expert text analyst specializing in paraphrase detection. Your task is to "
             "determine whether a paraphrased sentence was created by a human or by an AI/LLM "
             "system.\n\nTASK CONTEXT: You are analyzing paraphrased versions of original text. "
             "Human paraphrases tend to be more natural, contextually aware, and show human "
             "linguistic intuition. LLM paraphrases often exhibit systematic patterns, "
             "over-formalization, or subtle unnaturalness.\n\nCLASSIFICATION CRITERIA:\n- Human "
             "paraphrase (0): Natural flow, contextual understanding, human-like word choices, "
             "appropriate informality/formality\n- LLM paraphrase (1): Systematic rewording "
             "patterns, over-precision, unnatural phrasing, AI-like formalization\n\nIMPORTANT: You "
             "must respond with ONLY the number 0 or 1. No explanation or additional text is "
             "allowed.";
    case 2:
      return "You are an expert in AI-generated text detection. Your task is to determine whether a "
             "sentence was originally written by a human or generated by an AI/LLM system.\n\nTASK "
             "CONTEXT: You are analyzing original text authorship. Human-written text shows natural "
             "creativity, personal voice, and authentic expression. LLM-generated text often "
             "exhibits training patterns, generic phrasing, or artificial "
             "coherence.\n\nCLASSIFICATION CRITERIA:\n- Human original (0): Authentic voice, natural "
             "imperfections, personal style, genuine creativity, contextual authenticity\n- LLM "
             "generated (1): Training data patterns, generic expressions, artificial smoothness, "
             "systematic structure\n\nIMPORTANT: You must respond with ONLY the number 0 or 1. No "
             "explanation or additional text is allowed.";
    case 3:
      return "You are a specialist in detecting AI text laundering techniques. Your task is to "
             "determine the level of AI processing in text -- distinguishing between LLM-paraphrased "
             "original content versus LLM-paraphrased generated content.\n\nTASK CONTEXT: You are "
             "comparing two types of AI-processed text: (1) LLM paraphrases of human original text, "
             "and (2) LLM paraphrases of AI-generated text. The second type represents deeper AI "
             "processing and \"laundering\" attempts.\n\nCLASSIFICATION CRITERIA:\n- LLM paraphrased "
             "original (0): AI paraphrase of human content -- retains some human authenticity "
             "beneath AI processing\n- LLM paraphrased generated (1): AI paraphrase of AI content -- "
             "multiple layers of AI processing, more artificial patterns\n\nIMPORTANT: You must "
             "respond with ONLY the number 0 or 1. No explanation or additional text is allowed.";
    case 4:
      return "You are an expert in detecting iterative AI processing depth. Your task is to "
             "determine whether text has undergone fewer or more iterations of LLM "
             "paraphrasing.\n\nTASK CONTEXT: You are analyzing text that has been paraphrased "
             "multiple times by AI systems. Earlier iterations retain more original characteristics, "
             "while deeper iterations show increasing AI processing artifacts and departure from "
             "natural expression.\n\nCLASSIFICATION CRITERIA:\n- 1st iteration paraphrase (0): Less "
             "deep AI processing -- some original patterns remain, moderate AI influence\n- 3rd "
             "iteration paraphrase (1): Deeper AI processing -- heavily processed, multiple layers "
             "of AI transformation, more artificial\n\nIMPORTANT: You must respond with ONLY the "
             "number 0 or 1. No explanation or additional text is allowed.";
    case 5:
      return "You are a cybersecurity expert specializing in detecting sophisticated AI paraphrase "
             "attacks. Your task is to distinguish between authentic human-written text and heavily "
             "processed AI paraphrases designed to evade detection.\n\nTASK CONTEXT: You are facing "
             "the most challenging detection scenario -- authentic human original text versus "
             "3rd-iteration LLM paraphrases (the most sophisticated paraphrase attacks). These "
             "attacks are designed to fool detection systems.\n\nCLASSIFICATION CRITERIA:\n- Human "
             "original (0): Authentic human expression, natural imperfections, genuine voice, "
             "unprocessed authenticity\n- Deep paraphrase attack (1): Heavily processed AI text, "
             "multiple transformation layers, sophisticated evasion attempts\n\nIMPORTANT: You must "
             "respond with ONLY the number 0 or 1. No explanation or additional text is allowed.";
    default:
      raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

// System personas for the sentence-pair judges.
const char* pair_persona(int task_id) {
  switch (task_id) {
    case 1:
      return "You are an expert text analyst specializing in comparative paraphrase detection. Your "
             "task is to determine which sentence in a pair was paraphrased by a human versus an "
             "AI/LLM system.\n\nTASK CONTEXT: You are comparing two paraphrased versions of the same "
             "content. One was created by a human, the other by an AI/LLM. Human paraphrases show "
             "natural linguistic intuition, while LLM paraphrases exhibit systematic "
             "patterns.\n\nCOMPARISON CRITERIA:\n- Human paraphrase: Natural flow, contextual "
             "awareness, human-like word choices, appropriate style\n- LLM paraphrase: Systematic "
             "rewording, over-precision, unnatural phrasing, AI-like formalization\n\nINSTRUCTIONS:\n"
             "1. Analyze both sentences carefully\n2. Determine which sentence shows more human-like "
             "paraphrasing characteristics\n3. Respond with 0 if the FIRST sentence is more "
             "human-like, 1 if the SECOND sentence is more human-like\n\nIMPORTANT: You must respond "
             "with ONLY the number 0 or 1. No explanation or additional text is allowed.";
    case 2:
      return "You are an expert in comparative AI-generated text detection. Your task is to "
             "determine which sentence in a pair was originally written by a human versus generated "
             "by an AI/LLM system.\n\nTASK CONTEXT: You are comparing original text authorship "
             "between two sentences. One is authentic human writing, the other is AI-generated. "
             "Human writing shows personal voice and natural expression, while AI writing exhibits "
             "training patterns.\n\nCOMPARISON CRITERIA:\n- Human original: Authentic voice, natural "
             "imperfections, personal style, genuine creativity\n- LLM generated: Training patterns, "
             "generic expressions, artificial smoothness, systematic structure\n\nINSTRUCTIONS:\n1. "
             "Analyze both sentences for authenticity markers\n2. Determine which sentence shows "
             "more human authorship characteristics\n3. Respond with 0 if the FIRST sentence is more "
             "human-authored, 1 if the SECOND sentence is more human-authored\n\nIMPORTANT: You must "
             "respond with ONLY the number 0 or 1. No explanation or additional text is allowed.";
    case 3:
      return "You are a specialist in comparative AI text laundering detection. Your task is to "
             "determine which sentence in a pair shows deeper AI processing - comparing "
             "LLM-paraphrased original content versus LLM-paraphrased generated content.\n\nTASK "
             "CONTEXT: You are comparing two types of AI-processed text to identify which has "
             "undergone more intensive AI processing (text laundering). One is an LLM paraphrase of "
             "human content, the other is an LLM paraphrase of AI content.\n\nCOMPARISON CRITERIA:\n"
             "- LLM paraphrased original: AI processing of human content - retains some "
             "authenticity\n- LLM paraphrased generated: AI processing of AI content - deeper "
             "artificial patterns, more laundering\n\nINSTRUCTIONS:\n1. Analyze both sentences for "
             "depth of AI processing\n2. Determine which sentence shows more intensive AI "
             "laundering\n3. Respond with 0 if the FIRST sentence shows more AI laundering, 1 if the "
             "SECOND sentence shows more AI laundering\n\nIMPORTANT: You must respond with ONLY the "
             "number 0 or 1. No explanation or additional text is allowed.";
    case 4:
      return "You are an expert in comparative iterative AI processing analysis. Your task is to "
             "determine which sentence in a pair has undergone deeper iterative LLM "
             "paraphrasing.\n\nTASK CONTEXT: You are comparing sentences that have been paraphrased "
             "different numbers of times by AI systems. One has fewer iterations, the other has more "
             "iterations. Deeper iterations show increasing AI processing artifacts.\n\nCOMPARISON "
             "CRITERIA:\n- 1st iteration: Less deep processing - some original characteristics "
             "remain\n- 3rd iteration: Deeper processing - heavily transformed, more artificial "
             "patterns\n\nINSTRUCTIONS:\n1. Analyze both sentences for depth of iterative "
             "processing\n2. Determine which sentence shows more iterations of AI paraphrasing\n3. "
             "Respond with 0 if the FIRST sentence shows deeper processing, 1 if the SECOND sentence "
             "shows deeper processing\n\nIMPORTANT: You must respond with ONLY the number 0 or 1. No "
             "explanation or additional text is allowed.";
    case 5:
      return "You are a cybersecurity expert specializing in comparative detection of sophisticated "
             "AI paraphrase attacks. Your task is to distinguish between authentic human-written "
             "text and heavily processed AI paraphrases in direct comparison.\n\nTASK CONTEXT: You "
             "are facing the ultimate detection challenge - comparing authentic human original text "
             "against 3rd-iteration LLM paraphrases (sophisticated evasion attacks) to identify "
             "which is the authentic human text.\n\nCOMPARISON CRITERIA:\n- Human original: "
             "Authentic expression, natural imperfections, genuine voice, unprocessed\n- Deep "
             "paraphrase attack: Heavily processed, multiple AI transformations, sophisticated "
             "evasion\n\nINSTRUCTIONS:\n1. Analyze both sentences for authenticity versus AI "
             "processing\n2. Determine which sentence is the authentic human original\n3. Respond "
             "with 0 if the FIRST sentence is more human-original, 1 if the SECOND sentence is more "
             "human-original\n\nIMPORTANT: You must respond with ONLY the number 0 or 1. No "
             "explanation or additional text is allowed.";
    default:
      raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

struct FewShot {
  const char* text;
  const char* label;
};

// Three few-shot demonstrations per single-sentence task.
const std::array<FewShot, 3>& single_few_shots(int task_id) {
  static const std::array<FewShot, 3> task1 = {{
      {"The expeditious mahogany-colored vulpine creature propels itself in a vertical trajectory "
       "above the lethargic canine",
       "1"},
      {"A quick brown fox jumps over a sleepy dog", "0"},
      {"The research methodology employed in this investigation demonstrates a comprehensive "
       "approach to data collection and analysis",
       "1"},
  }};
  static const std::array<FewShot, 3> task2 = {{
      {"In today's rapidly evolving digital landscape, organizations must leverage cutting-edge "
       "technologies to optimize their operational efficiency and drive sustainable growth.",
       "1"},
      {"Ugh, my coffee maker broke again this morning. Third time this month! I swear these things "
       "are designed to fail right after the warranty expires.",
       "0"},
      {"The implementation of artificial intelligence solutions presents numerous opportunities for "
       "enhancing productivity while simultaneously addressing potential challenges related to "
       "workforce adaptation.",
       "1"},
  }};
  static const std::array<FewShot, 3> task3 = {{
      {"My neighbor fixed the squeaky gate yesterday, though honestly it took him three tries and a "
       "lot of muttering.",
       "0"},
      {"The optimization of operational workflows facilitates the systematic enhancement of "
       "organizational productivity across multiple functional domains.",
       "1"},
      {"She planted tomatoes along the back fence where the morning sun lingers longest.", "0"},
  }};
  static const std::array<FewShot, 3> task4 = {{
      {"The weather service expects scattered showers across the valley by late afternoon.", "0"},
      {"Precipitation phenomena of intermittent character are anticipated to manifest throughout "
       "the topographical depression subsequent to the meridian hours.",
       "1"},
      {"Local forecasters predict rain showers will reach the valley later today.", "0"},
  }};
  static const std::array<FewShot, 3> task5 = {{
      {"Dad burned the pancakes again but we ate them anyway, drowned in syrup.", "0"},
      {"The comprehensive utilization of advanced culinary methodologies ensures the optimal "
       "realization of breakfast preparation outcomes.",
       "1"},
      {"The systematic orchestration of matutinal nourishment procedures culminated in suboptimal "
       "griddle-cake manifestations.",
       "1"},
  }};
  switch (task_id) {
    case 1: return task1;
    case 2: return task2;
    case 3: return task3;
    case 4: return task4;
    case 5: return task5;
    default: raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

struct PairFewShot {
  const char* first;
  const char* second;
  const char* label;
};

// Three few-shot demonstrations per pair task, labels following each task's
// reply convention.
const std::array<PairFewShot, 3>& pair_few_shots(int task_id) {
  static const std::array<PairFewShot, 3> task1 = {{
      {"A quick brown fox jumps over a sleepy dog",
       "The expeditious mahogany-colored vulpine creature propels itself above the lethargic canine",
       "0"},
      {"The systematic rewording of this sentence demonstrates comprehensive lexical substitution",
       "I just swapped a few words around until it sounded right", "1"},
      {"We grabbed lunch at that little place by the station",
       "The consumption of the midday meal transpired at the diminutive establishment adjacent to "
       "the transit hub",
       "0"},
  }};
  static const std::array<PairFewShot, 3> task2 = {{
      {"Ugh, my coffee maker broke again this morning. Third time this month!",
       "In today's rapidly evolving digital landscape, organizations must leverage cutting-edge "
       "technologies.",
       "0"},
      {"The implementation of artificial intelligence solutions presents numerous opportunities for "
       "enhancing productivity.",
       "My cat knocked the plant off the windowsill and just stared at me.", "1"},
      {"Rain hammered the tin roof all night and I barely slept.",
       "The strategic alignment of core competencies drives sustainable value creation across the "
       "enterprise.",
       "0"},
  }};
  static const std::array<PairFewShot, 3> task3 = {{
      {"She planted tomatoes along the back fence where the morning sun lingers longest.",
       "The optimization of operational workflows facilitates the systematic enhancement of "
       "organizational productivity.",
       "1"},
      {"The comprehensive realization of strategic objectives necessitates systematic resource "
       "allocation frameworks.",
       "My neighbor fixed the squeaky gate, though it took him three tries.", "0"},
      {"He keeps his tools in an old biscuit tin under the workbench.",
       "The facilitation of optimal outcomes requires the holistic integration of multifaceted "
       "procedural paradigms.",
       "1"},
  }};
  static const std::array<PairFewShot, 3> task4 = {{
      {"Local forecasters predict rain showers will reach the valley later today.",
       "Precipitation phenomena of intermittent character are anticipated to manifest throughout "
       "the topographical depression.",
       "1"},
      {"The systematic orchestration of matutinal nourishment procedures culminated in suboptimal "
       "outcomes.",
       "Breakfast preparation went wrong when the pancakes burned.", "0"},
      {"The report summarizes last quarter's sales figures for the board.",
       "The documentation encapsulates the comprehensive quantification of commercial transactions "
       "for executive deliberation.",
       "1"},
  }};
  static const std::array<PairFewShot, 3> task5 = {{
      {"Dad burned the pancakes again but we ate them anyway, drowned in syrup.",
       "The systematic orchestration of matutinal nourishment procedures culminated in suboptimal "
       "griddle-cake manifestations.",
       "0"},
      {"The comprehensive utilization of advanced methodologies ensures optimal realization of "
       "desired outcomes.",
       "My sister lost her keys again so we searched the couch cushions for an hour.", "1"},
      {"The bakery on Fifth Street still makes the best rye bread in town.",
       "The establishment specializing in baked commodities maintains preeminent quality standards "
       "in rye-based products.",
       "0"},
  }};
  switch (task_id) {
    case 1: return task1;
    case 2: return task2;
    case 3: return task3;
    case 4: return task4;
    case 5: return task5;
    default: raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

}  // namespace

std::string judge_user_text_single(const std::string& sentence) {
  return "Text: \"" + sentence + "\"";
}

std::string judge_user_text_pair(const std::string& first, const std::string& second) {
  return "Sentence 1: \"" + first + "\"\nSentence 2: \"" + second + "\"";
}

std::string judge_retry_message() {
  return "Your previous reply was not valid. Respond with ONLY the number 0 or 1.";
}

std::vector<ChatMessage> judge_conversation_single(int task_id, const std::string& sentence) {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", single_persona(task_id)});
  for (const auto& shot : single_few_shots(task_id)) {
    messages.push_back({"user", judge_user_text_single(shot.text)});
    messages.push_back({"assistant", shot.label});
  }
  messages.push_back({"user", judge_user_text_single(sentence)});
  return messages;
}

std::vector<ChatMessage> judge_conversation_pair(int task_id, const std::string& first,
                                                 const std::string& second) {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", pair_persona(task_id)});
  for (const auto& shot : pair_few_shots(task_id)) {
    messages.push_back({"user", judge_user_text_pair(shot.first, shot.second)});
    messages.push_back({"assistant", shot.label});
  }
  messages.push_back({"user", judge_user_text_pair(first, second)});
  return messages;
}

bool pair_reply_indexes_label1(int task_id) {
  switch (task_id) {
    case 3:
    case 4:
      return true;
    case 1:
    case 2:
    case 5:
      return false;
    default:
      raise(ErrorCode::invalid_argument, "task_id must be in 1..5");
  }
}

}  // namespace padben
