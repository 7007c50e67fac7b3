#include "judgekit/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "internal/strings.hpp"

namespace judgekit {

using nlohmann::json;
using internal::to_lower;
using internal::trim;

const std::vector<PromptVariant>& all_prompt_variants() {
  static const std::vector<PromptVariant> variants = {
      PromptVariant::Vanilla, PromptVariant::Defn, PromptVariant::Summ,
      PromptVariant::FewShots, PromptVariant::DSF,
  };
  return variants;
}

std::string to_string(PromptVariant variant) {
  switch (variant) {
    case PromptVariant::Vanilla: return "vanilla";
    case PromptVariant::Defn: return "defn";
    case PromptVariant::Summ: return "summ";
    case PromptVariant::FewShots: return "fewshots";
    case PromptVariant::DSF: return "dsf";
  }
  throw Error("invalid PromptVariant value");
}

PromptVariant prompt_variant_from_string(const std::string& token) {
  const std::string t = to_lower(trim(token));
  for (PromptVariant v : all_prompt_variants()) {
    if (t == to_string(v)) return v;
  }
  throw Error("unknown prompt variant \"" + token + "\"");
}

std::string to_string(ChatRole role) {
  switch (role) {
    case ChatRole::System: return "system";
    case ChatRole::User: return "user";
    case ChatRole::Assistant: return "assistant";
  }
  throw Error("invalid ChatRole value");
}

std::vector<FewShotExemplar> load_exemplars(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open exemplar file: " + path);
  std::vector<FewShotExemplar> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("topic") || !j.contains("text") ||
        !j.contains("label")) {
      throw Error(path + ":" + std::to_string(line_no) + ": malformed exemplar record");
    }
    FewShotExemplar e;
    try {
      e.topic = topic_from_string(j.at("topic").get<std::string>());
      e.text = j.at("text").get<std::string>();
      e.label = label_from_string(j.at("label").get<std::string>());
    } catch (const Error& err) {
      throw Error(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

constexpr const char* kClassifySystem =
    "Your task is to classify whether the given comment on Korean political news articles is offensive.";

constexpr const char* kDefinition =
    "Offensive language refers to words or expressions intended to insult, harm, or belittle individuals or groups. Especially in the context of Korean political discussions, this includes:\n"
    "- Insulting, derogatory, or combative language that may be directed at political figures, parties, or ideologies.\n"
    "- Discriminatory language based on political affiliation, race, religion, gender, or other personal attributes.\n"
    "- Sarcastic or harmful humor that may target political beliefs, parties, or individuals in a demeaning way.\n"
    "- Incitement of violence or hatred against political opponents, minority groups, or societal institutions.\n"
    "- Misinformation or harmful narratives that spread unverified or damaging political views, especially in a divisive or inflammatory manner.";

constexpr const char* kDefinitionBlock = "{{definition}}";

constexpr const char* kSummaryBlock =
    "The following sentences are a summary of the original article on which the comment was posted.\n"
    "\n"
    "Summary: {{summary}}";

constexpr const char* kFewShotsBlock =
    "You may refer to the following examples.\n"
    "\n"
    "{{exemplars}}";

constexpr const char* kVanillaTail =
    "Please classify whether the comment is offensive or not. Respond with only \"yes\" or \"no\", without any explanations.\n"
    "\n"
    "Comment: {{comment}}\n"
    "\n"
    "Label:";

constexpr const char* kSummarizeSystem =
    "Your task is to provide consistent summaries of Korean political news articles.";

constexpr const char* kSummarizeUser =
    "Based on the following title and content, please summarize the news article in three sentences.\n"
    "\n"
    "Title: {{title}}\n"
    "\n"
    "Content: {{content}}\n"
    "\n"
    "Summary:";

constexpr const char* kConsistencySystem =
    "Your task is to evaluate how well the given summary reflects the content of Korean political news articles.";

constexpr const char* kConsistencyUser =
    "Please score the following summary for its consistency with the corresponding article on a scale from 1 to 5, without any explanations. Consistency refers to how much of the information in the summary is actually present in the source article. A score of 5 means that all statements in the summary are fully supported by the article, while a score of 1 means the summary does not reflect the article at all.\n"
    "\n"
    "Summary: {{summary}}\n"
    "\n"
    "Source Title: {{title}}\n"
    "\n"
    "Source Content: {{content}}\n"
    "\n"
    "Score:";

constexpr const char* kPersonaSystem =
    "You argue that the given comment from Korean political news is {{persona}}, and provide a clear justification based on linguistic and contextual cues.";

constexpr const char* kRationaleUser =
    "You think the comment is {{persona}}.\n"
    "\n"
    "The following sentences are a summary of the original article on which the comment was posted.\n"
    "\n"
    "Summary: {{summary}}\n"
    "\n"
    "Based on the context, given a reason why you think the comment is {{persona}}. Please do so in one sentence.\n"
    "\n"
    "Reason:";

constexpr const char* kStanceUser =
    "You have to consider the given comment.\n"
    "\n"
    "Comment: {{comment}}\n"
    "\n"
    "Your argument about this comment:\n"
    "{{own_rationale}}\n"
    "\n"
    "The {{other_persona}} side's argument about this comment:\n"
    "{{other_rationale}}\n"
    "\n"
    "Based on your argument, agree or rebut the {{other_persona}} sides' argument and explain your reason. Please do so in one sentence.\n"
    "\n"
    "Stance:";

constexpr const char* kJudgeSystem =
    "Your task is classify whether the given comment on Korean political news articles is offensive. You should consider both sides, offensive and non-offensive, fairly to maintain a balanced perspective.";

constexpr const char* kJudgeUser =
    "As a judge, assess the debaters' arguments and stances based on the following criteria, \"How well they capture the non-offensiveness or offensiveness of the comment\". Consider both sides fairly to maintain a balanced perspective and make a broad judgment.\n"
    "\n"
    "The offensive side's argument: {{rationale_offensive}}\n"
    "The non-offensive side's argument: {{rationale_nonoffensive}}\n"
    "\n"
    "The offensive side's stance: {{stance_offensive}}\n"
    "The non-offensive side's stance: {{stance_nonoffensive}}\n"
    "\n"
    "Please classify whether the comment is offensive or not. Respond with only \"yes\" or \"no\", without any explanations.\n"
    "\n"
    "Comment: {{comment}}\n"
    "\n"
    "Label:";

// name -> (file stem, member pointer)
struct TemplateField {
  const char* file;
  std::string PromptTemplates::* member;
};

const std::vector<TemplateField>& template_fields() {
  static const std::vector<TemplateField> fields = {
      {"classify_system", &PromptTemplates::classify_system},
      {"definition", &PromptTemplates::definition},
      {"definition_block", &PromptTemplates::definition_block},
      {"summary_block", &PromptTemplates::summary_block},
      {"fewshots_block", &PromptTemplates::fewshots_block},
      {"vanilla_tail", &PromptTemplates::vanilla_tail},
      {"summarize_system", &PromptTemplates::summarize_system},
      {"summarize_user", &PromptTemplates::summarize_user},
      {"consistency_system", &PromptTemplates::consistency_system},
      {"consistency_user", &PromptTemplates::consistency_user},
      {"persona_system", &PromptTemplates::persona_system},
      {"rationale_user", &PromptTemplates::rationale_user},
      {"stance_user", &PromptTemplates::stance_user},
      {"judge_system", &PromptTemplates::judge_system},
      {"judge_user", &PromptTemplates::judge_user},
  };
  return fields;
}

}  // namespace

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates defaults = [] {
    PromptTemplates t;
    t.classify_system = kClassifySystem;
    t.definition = kDefinition;
    t.definition_block = kDefinitionBlock;
    t.summary_block = kSummaryBlock;
    t.fewshots_block = kFewShotsBlock;
    t.vanilla_tail = kVanillaTail;
    t.summarize_system = kSummarizeSystem;
    t.summarize_user = kSummarizeUser;
    t.consistency_system = kConsistencySystem;
    t.consistency_user = kConsistencyUser;
    t.persona_system = kPersonaSystem;
    t.rationale_user = kRationaleUser;
    t.stance_user = kStanceUser;
    t.judge_system = kJudgeSystem;
    t.judge_user = kJudgeUser;
    return t;
  }();
  return defaults;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("template directory not found: " + dir);
  PromptTemplates t = defaults();
  for (const TemplateField& field : template_fields()) {
    const fs::path p = fs::path(dir) / (std::string(field.file) + ".txt");
    if (!fs::exists(p)) continue;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open template file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    // Text editors append a final newline; templates are byte-exact without it.
    if (content.ends_with("\r\n")) content.erase(content.size() - 2);
    else if (content.ends_with("\n")) content.pop_back();
    t.*(field.member) = std::move(content);
  }
  return t;
}

std::string render_slots(const std::string& tpl,
                         const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out = tpl;
  for (const auto& [key, value] : slots) {
    const std::string needle = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::vector<ChatMessage> render_prompt(const PromptTemplates& templates, PromptVariant variant,
                                       const Comment& comment, const Article* article,
                                       std::span<const FewShotExemplar> exemplars,
                                       const std::string& definition_text) {
  if (comment.text.empty()) throw Error("render_prompt: empty comment text");

  const bool want_defn = variant == PromptVariant::Defn || variant == PromptVariant::DSF;
  const bool want_summ = variant == PromptVariant::Summ || variant == PromptVariant::DSF;
  const bool want_few = variant == PromptVariant::FewShots || variant == PromptVariant::DSF;

  std::vector<std::string> blocks;
  if (want_defn) {
    const std::string& text = definition_text.empty() ? templates.definition : definition_text;
    blocks.push_back(render_slots(templates.definition_block, {{"definition", text}}));
  }
  if (want_summ) {
    if (article == nullptr || !article->summary.has_value() || article->summary->empty()) {
      throw Error("render_prompt: variant " + to_string(variant) +
                  " requires an article summary for comment \"" + comment.id + "\"");
    }
    blocks.push_back(render_slots(templates.summary_block, {{"summary", *article->summary}}));
  }
  if (want_few) {
    bool have_offensive = false;
    bool have_non_offensive = false;
    std::vector<std::string> entries;
    for (const FewShotExemplar& e : exemplars) {
      if (e.topic != comment.topic) continue;
      // Exemplar labels render in the reply vocabulary the prompt demands.
      const char* label_word = e.label == LabelValue::Offensive ? "yes" : "no";
      entries.push_back("Comment: " + e.text + "\n\nLabel: " + label_word);
      (e.label == LabelValue::Offensive ? have_offensive : have_non_offensive) = true;
    }
    if (!have_offensive || !have_non_offensive) {
      throw Error("render_prompt: variant " + to_string(variant) +
                  " needs at least one exemplar per label for topic " +
                  to_string(comment.topic));
    }
    blocks.push_back(render_slots(templates.fewshots_block,
                                  {{"exemplars", internal::join(entries, "\n\n")}}));
  }
  blocks.push_back(render_slots(templates.vanilla_tail, {{"comment", comment.text}}));

  return {
      {ChatRole::System, templates.classify_system},
      {ChatRole::User, internal::join(blocks, "\n\n")},
  };
}

std::vector<ChatMessage> render_prompt(PromptVariant variant, const Comment& comment,
                                       const Article* article,
                                       std::span<const FewShotExemplar> exemplars) {
  return render_prompt(PromptTemplates::defaults(), variant, comment, article, exemplars, "");
}

}  // namespace judgekit
