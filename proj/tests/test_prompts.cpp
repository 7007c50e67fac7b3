#include <string>

#include "doctest.h"

#include "judgekit/prompts.hpp"
#include "test_helpers.hpp"

using namespace judgekit;

namespace {

// Fixed inputs shared with the golden fixture files.
Comment fixture_comment() {
  Comment c;
  c.id = "c1";
  c.article_id = "a1";
  c.topic = Topic::NorthKorea;
  c.text = "The summit coverage left out everything that actually mattered.";
  return c;
}

Article fixture_article() {
  Article a;
  a.id = "a1";
  a.topic = Topic::NorthKorea;
  a.title = "Summit talks resume";
  a.content = "Delegations met for a second day of talks.";
  a.summary =
      "Talks resumed after a pause. Both delegations met for two days. No agreement was announced.";
  return a;
}

std::vector<FewShotExemplar> fixture_exemplars() {
  return {
      {Topic::NorthKorea, "Those negotiators are spineless clowns, every last one.",
       LabelValue::Offensive},
      {Topic::NorthKorea, "I doubt the talks will change anything this year.",
       LabelValue::NonOffensive},
      // Different topic; must never leak into the rendered prompt.
      {Topic::Administration, "The ministry budget memo was clear enough.",
       LabelValue::NonOffensive},
  };
}

std::string serialize(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const ChatMessage& m : messages) {
    out += "## " + to_string(m.role) + "\n" + m.content + "\n";
  }
  return out;
}

std::string golden_path(const std::string& name) {
  return std::string(JUDGEKIT_SOURCE_DIR) + "/tests/data/golden_prompts/" + name + ".txt";
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("rendered prompts are byte-identical to the golden fixtures") {
  const Comment comment = fixture_comment();
  const Article article = fixture_article();
  const std::vector<FewShotExemplar> exemplars = fixture_exemplars();
  for (PromptVariant variant : all_prompt_variants()) {
    CAPTURE(to_string(variant));
    const std::vector<ChatMessage> messages =
        render_prompt(variant, comment, &article, exemplars);
    CHECK(serialize(messages) == helpers::read_file(golden_path(to_string(variant))));
  }
}

TEST_CASE("render_prompt structure: two messages, fixed system, Label: tail") {
  const Comment comment = fixture_comment();
  const Article article = fixture_article();
  for (PromptVariant variant : all_prompt_variants()) {
    const std::vector<ChatMessage> messages =
        render_prompt(variant, comment, &article, fixture_exemplars());
    REQUIRE(messages.size() == 2);
    CHECK(messages[0].role == ChatRole::System);
    CHECK(messages[1].role == ChatRole::User);
    CHECK(messages[0].content == PromptTemplates::defaults().classify_system);
    CHECK(messages[1].content.ends_with("Label:"));
    CHECK(messages[1].content.find("Respond with only \"yes\" or \"no\"") != std::string::npos);
    // The comment text appears verbatim exactly once.
    CHECK(count_occurrences(messages[1].content, comment.text) == 1);
  }
}

TEST_CASE("variant blocks appear in Defn, Summ, FewShots order") {
  const Comment comment = fixture_comment();
  const Article article = fixture_article();
  const std::vector<ChatMessage> messages =
      render_prompt(PromptVariant::DSF, comment, &article, fixture_exemplars());
  const std::string& user = messages[1].content;
  const std::size_t defn = user.find("Offensive language refers to");
  const std::size_t summ = user.find("a summary of the original article");
  const std::size_t shots = user.find("You may refer to the following examples.");
  const std::size_t tail = user.find("Please classify whether the comment is offensive");
  REQUIRE(defn != std::string::npos);
  REQUIRE(summ != std::string::npos);
  REQUIRE(shots != std::string::npos);
  REQUIRE(tail != std::string::npos);
  CHECK(defn < summ);
  CHECK(summ < shots);
  CHECK(shots < tail);

  // Vanilla carries none of the optional blocks.
  const std::vector<ChatMessage> vanilla =
      render_prompt(PromptVariant::Vanilla, comment, nullptr);
  CHECK(vanilla[1].content.find("Offensive language refers to") == std::string::npos);
  CHECK(vanilla[1].content.find("Summary:") == std::string::npos);
  CHECK(vanilla[1].content.find("examples") == std::string::npos);

  // Defn adds exactly the definition block.
  const std::vector<ChatMessage> defn_only =
      render_prompt(PromptVariant::Defn, comment, nullptr);
  CHECK(defn_only[1].content.find("intended to insult, harm, or belittle") != std::string::npos);
}

TEST_CASE("render_prompt is deterministic") {
  const Comment comment = fixture_comment();
  const Article article = fixture_article();
  const auto a = render_prompt(PromptVariant::DSF, comment, &article, fixture_exemplars());
  const auto b = render_prompt(PromptVariant::DSF, comment, &article, fixture_exemplars());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].role == b[i].role);
    CHECK(a[i].content == b[i].content);
  }
}

TEST_CASE("render_prompt errors: missing summary, missing exemplars, empty text") {
  const Comment comment = fixture_comment();
  Article article = fixture_article();
  article.summary.reset();
  CHECK_THROWS_WITH_AS(render_prompt(PromptVariant::Summ, comment, &article),
                       doctest::Contains("summary"), Error);
  CHECK_THROWS_AS(render_prompt(PromptVariant::Summ, comment, nullptr), Error);

  // FewShots with no exemplar for the comment's topic, or only one label.
  CHECK_THROWS_WITH_AS(render_prompt(PromptVariant::FewShots, comment, nullptr),
                       doctest::Contains("exemplar"), Error);
  const std::vector<FewShotExemplar> one_sided = {
      {Topic::NorthKorea, "hostile words", LabelValue::Offensive}};
  CHECK_THROWS_AS(render_prompt(PromptVariant::FewShots, comment, nullptr, one_sided), Error);

  Comment empty = comment;
  empty.text.clear();
  CHECK_THROWS_AS(render_prompt(PromptVariant::Vanilla, empty, nullptr), Error);
}

TEST_CASE("exemplar labels render as yes/no and skip other topics") {
  const std::vector<ChatMessage> messages = render_prompt(
      PromptVariant::FewShots, fixture_comment(), nullptr, fixture_exemplars());
  const std::string& user = messages[1].content;
  CHECK(user.find("Label: yes") != std::string::npos);
  CHECK(user.find("Label: no") != std::string::npos);
  CHECK(user.find("ministry budget memo") == std::string::npos);
}

TEST_CASE("template directory overrides win, byte-exactly") {
  helpers::TempDir tmp("templates");
  helpers::write_file(tmp.file("vanilla_tail.txt"), "Custom tail {{comment}} END\n");
  const PromptTemplates templates = PromptTemplates::load_dir(tmp.path().string());
  CHECK(templates.vanilla_tail == "Custom tail {{comment}} END");  // trailing newline stripped
  CHECK(templates.classify_system == PromptTemplates::defaults().classify_system);

  const std::vector<ChatMessage> messages = render_prompt(
      templates, PromptVariant::Vanilla, fixture_comment(), nullptr, {}, "");
  CHECK(messages[1].content ==
        "Custom tail The summit coverage left out everything that actually mattered. END");
  CHECK_THROWS_AS(PromptTemplates::load_dir(tmp.file("nope")), Error);
}

TEST_CASE("the shipped template directory matches the built-in defaults") {
  const PromptTemplates shipped =
      PromptTemplates::load_dir(std::string(JUDGEKIT_SOURCE_DIR) + "/templates");
  const PromptTemplates& defaults = PromptTemplates::defaults();
  CHECK(shipped.classify_system == defaults.classify_system);
  CHECK(shipped.definition == defaults.definition);
  CHECK(shipped.definition_block == defaults.definition_block);
  CHECK(shipped.summary_block == defaults.summary_block);
  CHECK(shipped.fewshots_block == defaults.fewshots_block);
  CHECK(shipped.vanilla_tail == defaults.vanilla_tail);
  CHECK(shipped.summarize_system == defaults.summarize_system);
  CHECK(shipped.summarize_user == defaults.summarize_user);
  CHECK(shipped.consistency_system == defaults.consistency_system);
  CHECK(shipped.consistency_user == defaults.consistency_user);
  CHECK(shipped.persona_system == defaults.persona_system);
  CHECK(shipped.rationale_user == defaults.rationale_user);
  CHECK(shipped.stance_user == defaults.stance_user);
  CHECK(shipped.judge_system == defaults.judge_system);
  CHECK(shipped.judge_user == defaults.judge_user);
}

TEST_CASE("load_exemplars reads the fixture format") {
  helpers::TempDir tmp("exemplars");
  helpers::write_file(tmp.file("ex.jsonl"),
                      R"({"topic":"north_korea","text":"sample one","label":"offensive"})"
                      "\n"
                      R"({"topic":"north_korea","text":"sample two","label":"non-offensive"})"
                      "\n");
  const std::vector<FewShotExemplar> exemplars = load_exemplars(tmp.file("ex.jsonl"));
  REQUIRE(exemplars.size() == 2);
  CHECK(exemplars[0].topic == Topic::NorthKorea);
  CHECK(exemplars[0].label == LabelValue::Offensive);
  CHECK(exemplars[1].text == "sample two");

  helpers::write_file(tmp.file("bad.jsonl"), R"({"topic":"north_korea"})" "\n");
  CHECK_THROWS_AS(load_exemplars(tmp.file("bad.jsonl")), Error);
}
