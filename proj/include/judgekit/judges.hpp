#pragma once

#include <span>
#include <string>

#include "judgekit/chat.hpp"
#include "judgekit/corpus.hpp"
#include "judgekit/prompts.hpp"

namespace judgekit {

enum class Verdict { Offensive, NonOffensive, Unparseable };

std::string to_string(Verdict verdict);

// Total function mapping a raw model reply to a verdict. The reply is
// lowercased and stripped of surrounding whitespace/punctuation; a leading
// token "yes" means Offensive, "no" means NonOffensive, anything else is
// Unparseable.
Verdict parse_verdict(const std::string& raw);

// One debate run over a single comment: two persona rationales, two
// rebuttal stances, and the judge's verdict. Produced by exactly five
// endpoint calls.
struct DebateTranscript {
  std::string comment_id;
  std::string rationale_offensive;
  std::string rationale_nonoffensive;
  std::string stance_offensive;
  std::string stance_nonoffensive;
  Verdict verdict = Verdict::Unparseable;
};

// Sends one classification request and parses the reply. Retries up to
// config.max_retries times on transport failure or an unparseable reply;
// exhausting retries on unparseable content returns Verdict::Unparseable,
// while a transport failure on the last attempt rethrows TransportError.
Verdict classify(const JudgeConfig& config, ChatClient& client,
                 std::span<const ChatMessage> messages);

// Generates the three-sentence summary (summary_temperature/summary_top_p)
// and stores it back on the article. Empty replies are retried, then an
// error.
std::string summarize_article(const JudgeConfig& config, ChatClient& client,
                              Article& article,
                              const PromptTemplates& templates = PromptTemplates::defaults());

// Likert self-assessment of a summary. The first integer token of the reply
// is the score and must lie in 1..5; anything else is retried, then an error.
int score_summary_consistency(const JudgeConfig& config, ChatClient& client,
                              const std::string& summary, const Article& article,
                              const PromptTemplates& templates = PromptTemplates::defaults());

// Runs the five-leg debate: offensive rationale, non-offensive rationale,
// offensive stance, non-offensive stance, judge verdict — strictly in that
// order, one endpoint call each. Any leg failing after retries aborts with an
// error naming the leg; an unparseable judge reply after retries yields
// Verdict::Unparseable in the transcript.
DebateTranscript run_debate(const JudgeConfig& config, ChatClient& client,
                            const Comment& comment, const std::string& summary,
                            const PromptTemplates& templates = PromptTemplates::defaults());

}  // namespace judgekit
