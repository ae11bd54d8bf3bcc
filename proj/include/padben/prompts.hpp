#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padben/provider.hpp"

namespace padben {

// Prompt templates for the generation pipeline and the prompt-based judges.
// The templates are fixed text; mocks parse them back with the extract/parse
// helpers below.

std::string completion_prompt(const std::string& sentence_prefix, std::size_t target_length,
                              std::size_t max_length, const std::vector<std::string>& keywords);

std::string paraphrase_prompt(const std::string& text);

struct CompletionPromptParts {
  std::string prefix;
  std::size_t target_length = 0;
  std::size_t max_length = 0;
  std::vector<std::string> keywords;
};

std::optional<CompletionPromptParts> parse_completion_prompt(const std::string& prompt);
std::optional<std::string> parse_paraphrase_prompt(const std::string& prompt);

// Removes response scaffolding real providers occasionally add despite the
// "Return ONLY ..." instruction: leading labels ("Completion:", "Paraphrased
// text:", ...) and one pair of wrapping quotes.
std::string strip_generation_wrappers(const std::string& text);

// Judge conversations: system persona for the task, three few-shot
// user/assistant turns, then the target query.
std::vector<ChatMessage> judge_conversation_single(int task_id, const std::string& sentence);
std::vector<ChatMessage> judge_conversation_pair(int task_id, const std::string& first,
                                                 const std::string& second);

std::string judge_user_text_single(const std::string& sentence);
std::string judge_user_text_pair(const std::string& first, const std::string& second);

// Follow-up user turn sent once when a judge reply is not exactly "0" or "1".
std::string judge_retry_message();

// Pair prompts for tasks 3 and 4 ask for the position of the MORE-processed
// sentence (reply == predicted label-1 position); tasks 1, 2 and 5 ask for
// the more HUMAN position (prediction = 1 - reply).
bool pair_reply_indexes_label1(int task_id);

}  // namespace padben
