#pragma once

#include <span>
#include <string>
#include <vector>

#include "judgekit/corpus.hpp"

namespace judgekit {

// The five classification prompt formulations. DSF composes the Defn, Summ
// and FewShots blocks on top of the Vanilla tail.
enum class PromptVariant { Vanilla, Defn, Summ, FewShots, DSF };

const std::vector<PromptVariant>& all_prompt_variants();
std::string to_string(PromptVariant variant);
// Accepts "vanilla", "defn", "summ", "fewshots", "dsf" (case-insensitive).
PromptVariant prompt_variant_from_string(const std::string& token);

enum class ChatRole { System, User, Assistant };

std::string to_string(ChatRole role);

struct ChatMessage {
  ChatRole role = ChatRole::User;
  std::string content;
};

struct FewShotExemplar {
  Topic topic = Topic::GeneralPolitics;
  std::string text;
  LabelValue label = LabelValue::NonOffensive;
};

// Line-delimited {"topic","text","label"} fixture file.
std::vector<FewShotExemplar> load_exemplars(const std::string& path);

// The full prompt set. Individual templates can be overridden by dropping a
// file with the matching name (e.g. vanilla_tail.txt) into a template
// directory; anything absent falls back to the built-in default. Slots use
// {{name}} syntax: {{comment}}, {{summary}}, {{definition}}, {{exemplars}},
// {{title}}, {{content}}, {{persona}}, {{own_rationale}}, {{other_rationale}},
// {{other_persona}}, {{rationale_offensive}}, {{rationale_nonoffensive}},
// {{stance_offensive}}, {{stance_nonoffensive}}.
struct PromptTemplates {
  std::string classify_system;
  std::string definition;        // default definition text
  std::string definition_block;  // Defn block shape; receives {{definition}}
  std::string summary_block;
  std::string fewshots_block;
  std::string vanilla_tail;
  std::string summarize_system;
  std::string summarize_user;
  std::string consistency_system;
  std::string consistency_user;
  std::string persona_system;
  std::string rationale_user;
  std::string stance_user;
  std::string judge_system;
  std::string judge_user;

  static const PromptTemplates& defaults();
  static PromptTemplates load_dir(const std::string& dir);
};

// Substitutes {{key}} slots; unknown slots are left untouched.
std::string render_slots(
    const std::string& tpl,
    const std::vector<std::pair<std::string, std::string>>& slots);

// Renders the two-message classification prompt for a variant. The user
// message concatenates, in order, the Defn block (if applicable), the Summ
// block, the FewShots block, then the Vanilla tail ending in "Label:".
// Summ/DSF require an article with a summary; FewShots/DSF require at least
// one exemplar of each label for the comment's topic. When definition_text is
// empty the template default is used.
std::vector<ChatMessage> render_prompt(const PromptTemplates& templates,
                                       PromptVariant variant,
                                       const Comment& comment,
                                       const Article* article,
                                       std::span<const FewShotExemplar> exemplars,
                                       const std::string& definition_text);

// Same, with the default template set.
std::vector<ChatMessage> render_prompt(PromptVariant variant,
                                       const Comment& comment,
                                       const Article* article = nullptr,
                                       std::span<const FewShotExemplar> exemplars = {});

}  // namespace judgekit
