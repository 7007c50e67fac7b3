#include "judgekit/judges.hpp"

#include <cctype>
#include <optional>

#include "internal/strings.hpp"

namespace judgekit {

using internal::trim;

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Offensive: return "offensive";
    case Verdict::NonOffensive: return "non-offensive";
    case Verdict::Unparseable: return "unparseable";
  }
  throw Error("invalid Verdict value");
}

Verdict parse_verdict(const std::string& raw) {
  std::size_t i = 0;
  while (i < raw.size() && !std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
  std::string token;
  while (i < raw.size() && std::isalpha(static_cast<unsigned char>(raw[i]))) {
    token += static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
    ++i;
  }
  if (token == "yes") return Verdict::Offensive;
  if (token == "no") return Verdict::NonOffensive;
  return Verdict::Unparseable;
}

namespace {

ChatRequest make_request(const JudgeConfig& config, std::vector<ChatMessage> messages,
                         double temperature, double top_p) {
  ChatRequest request;
  request.model = config.model_name;
  request.messages = std::move(messages);
  request.temperature = temperature;
  request.top_p = top_p;
  request.max_tokens = config.max_tokens;
  return request;
}

// Runs one request with the config's retry budget. accept() decides whether
// a reply counts; nullopt means the budget ran out without an acceptable
// reply. Transport failures consume retries and rethrow once the budget is
// spent; any other exception propagates untouched.
std::optional<std::string> complete_with_retries(
    const JudgeConfig& config, ChatClient& client, const ChatRequest& request,
    const std::function<bool(const std::string&)>& accept) {
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    std::string reply;
    try {
      reply = client.complete(request);
    } catch (const TransportError&) {
      if (attempt == config.max_retries) throw;
      continue;
    }
    if (accept(reply)) return reply;
  }
  return std::nullopt;
}

}  // namespace

Verdict classify(const JudgeConfig& config, ChatClient& client,
                 std::span<const ChatMessage> messages) {
  const ChatRequest request = make_request(
      config, std::vector<ChatMessage>(messages.begin(), messages.end()),
      config.temperature, config.top_p);
  Verdict verdict = Verdict::Unparseable;
  const auto accepted =
      complete_with_retries(config, client, request, [&](const std::string& reply) {
        verdict = parse_verdict(reply);
        return verdict != Verdict::Unparseable;
      });
  return accepted ? verdict : Verdict::Unparseable;
}

std::string summarize_article(const JudgeConfig& config, ChatClient& client, Article& article,
                              const PromptTemplates& templates) {
  if (article.title.empty() || article.content.empty()) {
    throw Error("summarize_article: article \"" + article.id + "\" needs title and content");
  }
  std::vector<ChatMessage> messages = {
      {ChatRole::System, templates.summarize_system},
      {ChatRole::User, render_slots(templates.summarize_user,
                                    {{"title", article.title}, {"content", article.content}})},
  };
  const ChatRequest request = make_request(config, std::move(messages),
                                           config.summary_temperature, config.summary_top_p);
  std::string summary;
  const auto accepted =
      complete_with_retries(config, client, request, [&](const std::string& reply) {
        summary = trim(reply);
        return !summary.empty();
      });
  if (!accepted) {
    throw Error("summarize_article: empty reply for article \"" + article.id + "\" after retries");
  }
  article.summary = summary;
  return summary;
}

namespace {

// First integer token anywhere in the reply, or -1.
int first_integer(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == s.size()) return -1;
  int value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    value = value * 10 + (s[i] - '0');
    if (value > 1000000) return value;  // cap; anything this large is out of range anyway
    ++i;
  }
  return value;
}

}  // namespace

int score_summary_consistency(const JudgeConfig& config, ChatClient& client,
                              const std::string& summary, const Article& article,
                              const PromptTemplates& templates) {
  if (summary.empty()) throw Error("score_summary_consistency: empty summary");
  std::vector<ChatMessage> messages = {
      {ChatRole::System, templates.consistency_system},
      {ChatRole::User, render_slots(templates.consistency_user,
                                    {{"summary", summary},
                                     {"title", article.title},
                                     {"content", article.content}})},
  };
  const ChatRequest request =
      make_request(config, std::move(messages), config.temperature, config.top_p);
  int score = -1;
  const auto accepted =
      complete_with_retries(config, client, request, [&](const std::string& reply) {
        score = first_integer(reply);
        return score >= 1 && score <= 5;
      });
  if (!accepted) {
    throw Error("score_summary_consistency: no score in 1..5 for article \"" + article.id +
                "\" after retries");
  }
  return score;
}

namespace {

const char* persona_word(bool offensive) { return offensive ? "offensive" : "non-offensive"; }

std::vector<ChatMessage> rationale_messages(const PromptTemplates& t, bool offensive,
                                            const Comment& comment, const std::string& summary) {
  const std::string persona = persona_word(offensive);
  return {
      {ChatRole::System, render_slots(t.persona_system, {{"persona", persona}})},
      {ChatRole::User, render_slots(t.vanilla_tail, {{"comment", comment.text}})},
      {ChatRole::Assistant, offensive ? "yes" : "no"},
      {ChatRole::User,
       render_slots(t.rationale_user, {{"persona", persona}, {"summary", summary}})},
  };
}

std::vector<ChatMessage> stance_messages(const PromptTemplates& t, bool offensive,
                                         const Comment& comment, const std::string& own,
                                         const std::string& other) {
  return {
      {ChatRole::System, render_slots(t.persona_system, {{"persona", persona_word(offensive)}})},
      {ChatRole::User, render_slots(t.stance_user, {{"comment", comment.text},
                                                    {"own_rationale", own},
                                                    {"other_rationale", other},
                                                    {"other_persona", persona_word(!offensive)}})},
  };
}

std::vector<ChatMessage> judge_messages(const PromptTemplates& t, const Comment& comment,
                                        const DebateTranscript& d) {
  return {
      {ChatRole::System, t.judge_system},
      {ChatRole::User, render_slots(t.judge_user,
                                    {{"rationale_offensive", d.rationale_offensive},
                                     {"rationale_nonoffensive", d.rationale_nonoffensive},
                                     {"stance_offensive", d.stance_offensive},
                                     {"stance_nonoffensive", d.stance_nonoffensive},
                                     {"comment", comment.text}})},
  };
}

}  // namespace

DebateTranscript run_debate(const JudgeConfig& config, ChatClient& client,
                            const Comment& comment, const std::string& summary,
                            const PromptTemplates& templates) {
  if (comment.text.empty()) throw Error("run_debate: empty comment text");
  if (summary.empty()) {
    throw Error("run_debate: comment \"" + comment.id + "\" needs an article summary");
  }

  DebateTranscript transcript;
  transcript.comment_id = comment.id;

  const auto run_text_leg = [&](int leg_no, const char* leg_name,
                                std::vector<ChatMessage> messages) -> std::string {
    const ChatRequest request =
        make_request(config, std::move(messages), config.temperature, config.top_p);
    std::string text;
    std::optional<std::string> accepted;
    try {
      accepted = complete_with_retries(config, client, request, [&](const std::string& reply) {
        text = trim(reply);
        return !text.empty();
      });
    } catch (const TransportError& e) {
      throw Error("run_debate: leg " + std::to_string(leg_no) + " (" + leg_name +
                  ") failed for comment \"" + comment.id + "\": " + e.what());
    }
    if (!accepted) {
      throw Error("run_debate: leg " + std::to_string(leg_no) + " (" + leg_name +
                  ") returned empty replies for comment \"" + comment.id + "\" after retries");
    }
    return text;
  };

  transcript.rationale_offensive =
      run_text_leg(1, "offensive rationale", rationale_messages(templates, true, comment, summary));
  transcript.rationale_nonoffensive =
      run_text_leg(2, "non-offensive rationale",
                   rationale_messages(templates, false, comment, summary));
  transcript.stance_offensive =
      run_text_leg(3, "offensive stance",
                   stance_messages(templates, true, comment, transcript.rationale_offensive,
                                   transcript.rationale_nonoffensive));
  transcript.stance_nonoffensive =
      run_text_leg(4, "non-offensive stance",
                   stance_messages(templates, false, comment, transcript.rationale_nonoffensive,
                                   transcript.rationale_offensive));

  const std::vector<ChatMessage> final_messages = judge_messages(templates, comment, transcript);
  try {
    transcript.verdict = classify(config, client, final_messages);
  } catch (const TransportError& e) {
    throw Error("run_debate: leg 5 (judge verdict) failed for comment \"" + comment.id +
                "\": " + e.what());
  }
  return transcript;
}

}  // namespace judgekit
