#include "judgekit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "judgekit/judges.hpp"
#include "internal/parallel.hpp"
#include "internal/strings.hpp"

namespace judgekit {

namespace fs = std::filesystem;
using nlohmann::json;
using internal::trim;

JudgeMode judge_mode_from_string(const std::string& token) {
  const std::string t = internal::to_lower(trim(token));
  if (t == "pej-variant") return JudgeMode::PejVariant;
  if (t == "pej-full") return JudgeMode::PejFull;
  if (t == "mrj") return JudgeMode::Mrj;
  if (t == "summarize") return JudgeMode::Summarize;
  throw Error("unknown judge mode \"" + token + "\" (expected pej-variant, pej-full, mrj or summarize)");
}

IngestSummary cmd_ingest(const RunConfig& config) {
  const CorpusLoadResult corpus = load_corpus(config.corpus_path);
  const std::vector<Comment> kept =
      filter_by_length(corpus.comments, config.min_chars, config.max_chars);

  IngestSummary summary;
  summary.n_articles = corpus.articles.size();
  summary.n_comments_total = corpus.comments.size();
  summary.n_comments_kept = kept.size();
  summary.warnings = corpus.warnings;
  for (Topic topic : all_topics()) summary.kept_per_topic[topic] = 0;
  for (const Comment& c : kept) ++summary.kept_per_topic[c.topic];
  if (kept.empty()) {
    summary.warnings.push_back("length bounds " + std::to_string(config.min_chars) + ".." +
                               std::to_string(config.max_chars) + " exclude every comment");
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    json j;
    j["n_articles"] = summary.n_articles;
    j["n_comments_total"] = summary.n_comments_total;
    j["n_comments_kept"] = summary.n_comments_kept;
    j["kept_per_topic"] = json::object();
    for (const auto& [topic, count] : summary.kept_per_topic) {
      j["kept_per_topic"][to_string(topic)] = count;
    }
    j["warnings"] = summary.warnings;
    std::ofstream out(fs::path(config.out_dir) / "ingest.json", std::ios::binary);
    if (!out) throw Error("cannot write ingest.json to " + config.out_dir);
    out << j.dump(2) << "\n";
  }
  return summary;
}

namespace {

std::map<std::string, std::string> load_summaries_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open summaries file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("article_id") || !j.contains("summary")) {
      throw Error(path + ":" + std::to_string(line_no) + ": malformed summary record");
    }
    out[j.at("article_id").get<std::string>()] = j.at("summary").get<std::string>();
  }
  return out;
}

void write_labels_file(const fs::path& path, const std::string& judge_id,
                       const std::map<std::string, LabelValue>& labels) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write label file: " + path.string());
  for (const auto& [comment_id, label] : labels) {
    json line{{"judge_id", judge_id}, {"comment_id", comment_id}, {"label", to_string(label)}};
    out << line.dump() << "\n";
  }
}

std::map<std::string, LabelValue> read_existing_labels(const fs::path& path) {
  std::map<std::string, LabelValue> out;
  if (!fs::exists(path)) return out;
  for (const LabelRecord& r : load_labels(path.string())) out[r.comment_id] = r.label;
  return out;
}

// Merges this run's abstention counters into out_dir/stats.json.
void merge_stats_file(const fs::path& out_dir, const JudgeRunStats& stats) {
  const fs::path path = out_dir / "stats.json";
  json j = json::object();
  if (fs::exists(path)) {
    std::ifstream in(path);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) j = json::object();
  }
  if (!j.contains("abstentions") || !j.at("abstentions").is_object()) {
    j["abstentions"] = json::object();
  }
  for (const auto& [judge, count] : stats.abstentions) j["abstentions"][judge] = count;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write stats file: " + path.string());
  out << j.dump(2) << "\n";
}

struct JudgeContext {
  std::vector<Comment> comments;                  // kept, sorted
  std::map<std::string, Article> articles;        // by id, summaries applied
  PromptTemplates templates;
  std::vector<FewShotExemplar> exemplars;
};

JudgeContext make_judge_context(const RunConfig& config, const JudgeOptions& options) {
  JudgeContext ctx;
  CorpusLoadResult corpus = load_corpus(config.corpus_path);
  ctx.comments = filter_by_length(corpus.comments, config.min_chars, config.max_chars);
  for (Article& a : corpus.articles) ctx.articles.emplace(a.id, std::move(a));
  if (!options.summaries_path.empty()) {
    for (const auto& [article_id, summary] : load_summaries_file(options.summaries_path)) {
      auto it = ctx.articles.find(article_id);
      if (it != ctx.articles.end()) it->second.summary = summary;
    }
  }
  ctx.templates = config.template_dir.empty() ? PromptTemplates::defaults()
                                              : PromptTemplates::load_dir(config.template_dir);
  if (!config.exemplar_path.empty()) ctx.exemplars = load_exemplars(config.exemplar_path);
  return ctx;
}

const Article* find_article(const JudgeContext& ctx, const Comment& comment, bool required) {
  auto it = ctx.articles.find(comment.article_id);
  if (it == ctx.articles.end()) {
    if (required) {
      throw Error("comment \"" + comment.id + "\" needs article \"" + comment.article_id +
                  "\" for an article-dependent prompt, but the corpus has no such article");
    }
    return nullptr;
  }
  return &it->second;
}

bool variant_needs_article(PromptVariant v) {
  return v == PromptVariant::Summ || v == PromptVariant::DSF;
}

const JudgeConfig& select_config(const RunConfig& config, const std::string& judge_id) {
  if (config.judges.empty()) throw Error("no judge configs given");
  if (judge_id.empty()) return config.judges.front();
  for (const JudgeConfig& c : config.judges) {
    if (c.judge_id == judge_id) return c;
  }
  throw Error("no judge config with judge_id \"" + judge_id + "\"");
}

// Classification labels for one (config, variant) pair over all kept
// comments. Existing labels are kept unless force is set.
void run_variant_for_config(const JudgeOptions& options, const JudgeContext& ctx,
                            const JudgeConfig& config, PromptVariant variant,
                            ChatClient& client, JudgeRunStats& stats,
                            const fs::path& labels_dir,
                            std::map<std::string, std::map<std::string, LabelValue>>& by_judge) {
  const std::string judge_id = config.judge_id + "." + to_string(variant);
  const fs::path path = labels_dir / (judge_id + ".jsonl");
  std::map<std::string, LabelValue> labels =
      options.force ? std::map<std::string, LabelValue>{} : read_existing_labels(path);

  std::vector<const Comment*> todo;
  for (const Comment& c : ctx.comments) {
    if (!labels.count(c.id)) todo.push_back(&c);
  }

  std::mutex mutex;
  std::size_t abstained = 0;
  std::size_t requested = 0;
  internal::parallel_for(todo.size(), config.concurrency_limit, [&](std::size_t i) {
    const Comment& comment = *todo[i];
    try {
      const Article* article = find_article(ctx, comment, variant_needs_article(variant));
      const std::vector<ChatMessage> messages = render_prompt(
          ctx.templates, variant, comment, article, ctx.exemplars, ctx.templates.definition);
      const Verdict verdict = classify(config, client, messages);
      std::lock_guard lock(mutex);
      ++requested;
      if (verdict == Verdict::Unparseable) {
        ++abstained;
        labels[comment.id] = LabelValue::NonOffensive;
      } else {
        labels[comment.id] = verdict == Verdict::Offensive ? LabelValue::Offensive
                                                           : LabelValue::NonOffensive;
      }
    } catch (const Error& e) {
      throw Error("judge \"" + judge_id + "\", comment \"" + comment.id + "\": " + e.what());
    }
  });

  write_labels_file(path, judge_id, labels);
  stats.abstentions[judge_id] = abstained;
  stats.n_requests += requested;
  stats.written_files.push_back(path.string());
  by_judge[judge_id] = std::move(labels);
}

void write_vote_file(const std::string& judge_id, const fs::path& labels_dir,
                     const std::vector<std::map<std::string, LabelValue>*>& inputs,
                     const std::vector<Comment>& comments, TiePolicy policy,
                     JudgeRunStats& stats) {
  std::map<std::string, LabelValue> voted;
  for (const Comment& c : comments) {
    std::vector<LabelValue> votes;
    votes.reserve(inputs.size());
    for (const auto* labels : inputs) votes.push_back(labels->at(c.id));
    voted[c.id] = majority_vote(votes, policy);
  }
  const fs::path path = labels_dir / (judge_id + ".jsonl");
  write_labels_file(path, judge_id, voted);
  stats.written_files.push_back(path.string());
}

void run_summarize(const RunConfig& run, const JudgeOptions& options, JudgeContext& ctx,
                   const ChatClientProvider& provider, JudgeRunStats& stats) {
  const JudgeConfig& config = select_config(run, options.judge_id);
  std::shared_ptr<ChatClient> client = provider(config);

  // Articles referenced by at least one kept comment, in sorted-id order.
  std::set<std::string> needed;
  for (const Comment& c : ctx.comments) needed.insert(c.article_id);

  const fs::path summaries_path = fs::path(run.out_dir) / "summaries.jsonl";
  std::map<std::string, std::string> summaries;
  if (!options.force && fs::exists(summaries_path)) {
    summaries = load_summaries_file(summaries_path.string());
  }

  std::vector<Article*> todo;
  for (const std::string& id : needed) {
    auto it = ctx.articles.find(id);
    if (it == ctx.articles.end()) {
      throw Error("cannot summarize: corpus has no article \"" + id + "\"");
    }
    if (!summaries.count(id)) todo.push_back(&it->second);
  }

  std::map<std::string, int> scores;
  std::mutex mutex;
  internal::parallel_for(todo.size(), config.concurrency_limit, [&](std::size_t i) {
    Article& article = *todo[i];
    const std::string summary = summarize_article(config, *client, article, ctx.templates);
    const int score = score_summary_consistency(config, *client, summary, article, ctx.templates);
    std::lock_guard lock(mutex);
    summaries[article.id] = summary;
    scores[article.id] = score;
    stats.n_requests += 2;
  });

  fs::create_directories(run.out_dir);
  {
    std::ofstream out(summaries_path, std::ios::binary);
    if (!out) throw Error("cannot write " + summaries_path.string());
    for (const auto& [id, summary] : summaries) {
      out << json{{"article_id", id}, {"summary", summary}}.dump() << "\n";
    }
  }
  stats.written_files.push_back(summaries_path.string());

  const fs::path consistency_path = fs::path(run.out_dir) / "consistency.jsonl";
  std::map<std::string, int> all_scores;
  if (!options.force && fs::exists(consistency_path)) {
    std::ifstream in(consistency_path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.contains("article_id") && j.contains("score")) {
        all_scores[j.at("article_id").get<std::string>()] = j.at("score").get<int>();
      }
    }
  }
  for (const auto& [id, score] : scores) all_scores[id] = score;
  {
    std::ofstream out(consistency_path, std::ios::binary);
    if (!out) throw Error("cannot write " + consistency_path.string());
    for (const auto& [id, score] : all_scores) {
      out << json{{"article_id", id}, {"score", score}}.dump() << "\n";
    }
  }
  stats.written_files.push_back(consistency_path.string());
}

void run_mrj(const RunConfig& run, const JudgeOptions& options, const JudgeContext& ctx,
             const ChatClientProvider& provider, JudgeRunStats& stats) {
  const JudgeConfig& config = select_config(run, options.judge_id);
  std::shared_ptr<ChatClient> client = provider(config);
  const std::string judge_id = config.judge_id + ".mrj";
  const fs::path labels_dir = fs::path(run.out_dir) / "labels";
  const fs::path labels_path = labels_dir / (judge_id + ".jsonl");
  const fs::path transcripts_path =
      fs::path(run.out_dir) / "transcripts" / (judge_id + ".jsonl");

  std::map<std::string, LabelValue> labels =
      options.force ? std::map<std::string, LabelValue>{} : read_existing_labels(labels_path);
  std::map<std::string, json> transcripts;
  if (!options.force && fs::exists(transcripts_path)) {
    std::ifstream in(transcripts_path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.contains("comment_id")) {
        transcripts[j.at("comment_id").get<std::string>()] = j;
      }
    }
  }

  std::vector<const Comment*> todo;
  for (const Comment& c : ctx.comments) {
    if (!labels.count(c.id)) todo.push_back(&c);
  }

  std::mutex mutex;
  std::size_t abstained = 0;
  internal::parallel_for(todo.size(), config.concurrency_limit, [&](std::size_t i) {
    const Comment& comment = *todo[i];
    const Article* article = find_article(ctx, comment, true);
    if (!article->summary || article->summary->empty()) {
      throw Error("comment \"" + comment.id + "\" needs a summary for article \"" +
                  article->id + "\"; run `judge summarize` first or pass --summaries");
    }
    const DebateTranscript t =
        run_debate(config, *client, comment, *article->summary, ctx.templates);
    std::lock_guard lock(mutex);
    stats.n_requests += 5;
    if (t.verdict == Verdict::Unparseable) ++abstained;
    labels[comment.id] = t.verdict == Verdict::Offensive ? LabelValue::Offensive
                                                         : LabelValue::NonOffensive;
    transcripts[comment.id] = json{{"comment_id", t.comment_id},
                                   {"rationale_offensive", t.rationale_offensive},
                                   {"rationale_nonoffensive", t.rationale_nonoffensive},
                                   {"stance_offensive", t.stance_offensive},
                                   {"stance_nonoffensive", t.stance_nonoffensive},
                                   {"verdict", to_string(t.verdict)}};
  });

  write_labels_file(labels_path, judge_id, labels);
  stats.abstentions[judge_id] = abstained;
  stats.written_files.push_back(labels_path.string());

  fs::create_directories(transcripts_path.parent_path());
  std::ofstream out(transcripts_path, std::ios::binary);
  if (!out) throw Error("cannot write " + transcripts_path.string());
  for (const auto& [comment_id, t] : transcripts) out << t.dump() << "\n";
  stats.written_files.push_back(transcripts_path.string());
}

}  // namespace

JudgeRunStats cmd_judge(const RunConfig& config, const JudgeOptions& options,
                        const ChatClientProvider& provider) {
  if (config.out_dir.empty()) throw Error("cmd_judge: an output directory is required");
  JudgeContext ctx = make_judge_context(config, options);
  JudgeRunStats stats;

  switch (options.mode) {
    case JudgeMode::Summarize:
      run_summarize(config, options, ctx, provider, stats);
      break;
    case JudgeMode::Mrj:
      run_mrj(config, options, ctx, provider, stats);
      break;
    case JudgeMode::PejVariant:
    case JudgeMode::PejFull: {
      if (config.judges.empty()) throw Error("no judge configs given");
      const std::vector<PromptVariant> variants =
          options.mode == JudgeMode::PejVariant
              ? std::vector<PromptVariant>{options.variant}
              : all_prompt_variants();
      const fs::path labels_dir = fs::path(config.out_dir) / "labels";
      std::map<std::string, std::map<std::string, LabelValue>> by_judge;
      for (const JudgeConfig& judge : config.judges) {
        std::shared_ptr<ChatClient> client = provider(judge);
        for (PromptVariant variant : variants) {
          run_variant_for_config(options, ctx, judge, variant, *client, stats, labels_dir,
                                 by_judge);
        }
      }
      // Stage 1: vote across models within each variant.
      for (PromptVariant variant : variants) {
        std::vector<std::map<std::string, LabelValue>*> rows;
        for (const JudgeConfig& judge : config.judges) {
          rows.push_back(&by_judge.at(judge.judge_id + "." + to_string(variant)));
        }
        write_vote_file("pej." + to_string(variant), labels_dir, rows, ctx.comments,
                        config.tie_policy, stats);
      }
      // Stage 2: vote across the per-variant labels.
      if (options.mode == JudgeMode::PejFull) {
        std::map<std::string, LabelValue> final_labels;
        for (const Comment& c : ctx.comments) {
          PejGrid grid = PejGrid::make(config.judges.size(), variants, {});
          grid.values.reserve(config.judges.size() * variants.size());
          for (const JudgeConfig& judge : config.judges) {
            for (PromptVariant variant : variants) {
              grid.values.push_back(
                  by_judge.at(judge.judge_id + "." + to_string(variant)).at(c.id));
            }
          }
          final_labels[c.id] = pej_aggregate(grid, config.tie_policy).final_label;
        }
        const fs::path path = labels_dir / "pej.jsonl";
        write_labels_file(path, "pej", final_labels);
        stats.written_files.push_back(path.string());
      }
      break;
    }
  }

  merge_stats_file(config.out_dir, stats);
  return stats;
}

namespace {

std::optional<SummaryConsistencyStats> load_consistency_stats(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw Error("cannot open consistency file: " + path);
  std::vector<double> scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("score") || !j.at("score").is_number()) {
      throw Error(path + ":" + std::to_string(line_no) + ": malformed consistency record");
    }
    scores.push_back(j.at("score").get<double>());
  }
  if (scores.empty()) return std::nullopt;
  SummaryConsistencyStats stats;
  stats.n = scores.size();
  double sum = 0.0;
  for (double s : scores) sum += s;
  stats.mean = sum / static_cast<double>(scores.size());
  double sq = 0.0;
  for (double s : scores) sq += (s - stats.mean) * (s - stats.mean);
  stats.stddev = std::sqrt(sq / static_cast<double>(scores.size()));
  return stats;
}

std::map<std::string, std::size_t> load_abstentions(const std::vector<std::string>& paths) {
  std::map<std::string, std::size_t> out;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stats file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("malformed stats file: " + path);
    if (!j.contains("abstentions")) continue;
    for (const auto& [judge, count] : j.at("abstentions").items()) {
      out[judge] += count.get<std::size_t>();
    }
  }
  return out;
}

}  // namespace

Report cmd_analyze(const RunConfig& config, const AnalyzeOptions& options) {
  if (options.label_files.empty()) throw Error("cmd_analyze: at least one label file is required");

  const CorpusLoadResult corpus = load_corpus(config.corpus_path);
  std::vector<Comment> comments =
      filter_by_length(corpus.comments, config.min_chars, config.max_chars);
  if (comments.empty()) throw Error("cmd_analyze: length bounds exclude every comment");

  std::vector<std::string> items;
  items.reserve(comments.size());
  for (const Comment& c : comments) items.push_back(c.id);

  std::vector<LabelRecord> records;
  std::set<std::string> judge_set;
  for (const std::string& path : options.label_files) {
    for (LabelRecord& r : load_labels(path)) {
      judge_set.insert(r.judge_id);
      records.push_back(std::move(r));
    }
  }
  if (judge_set.empty()) throw Error("cmd_analyze: label files contain no records");
  std::vector<std::string> judges(judge_set.begin(), judge_set.end());

  AnalysisInputs inputs;
  inputs.comments = std::move(comments);
  inputs.matrix = align_matrix(records, judges, items);
  inputs.min_chars = config.min_chars;
  inputs.max_chars = config.max_chars;
  inputs.tie_policy = config.tie_policy;
  inputs.averaging = config.averaging;
  inputs.seed = config.seed;

  std::vector<std::string> trust =
      options.trust_judges.empty() ? judges : options.trust_judges;
  std::sort(trust.begin(), trust.end());
  trust.erase(std::unique(trust.begin(), trust.end()), trust.end());
  for (const std::string& judge : trust) {
    if (!judge_set.count(judge)) {
      throw Error("cmd_analyze: trust judge \"" + judge + "\" has no label file");
    }
  }
  if (options.allow_odd_trust) {
    if (trust.size() < 3 || trust.size() % 2 == 0) {
      throw Error("cmd_analyze: ground trust needs an odd judge count >= 3 (got " +
                  std::to_string(trust.size()) + ")");
    }
  } else if (trust.size() != 3) {
    throw Error("cmd_analyze: ground trust requires exactly three judges (got " +
                std::to_string(trust.size()) +
                "); pass --trust-judges to select them or --allow-odd-trust to generalize");
  }
  inputs.trust_judges = std::move(trust);

  if (!options.reference_path.empty()) {
    const std::vector<LabelRecord> reference_records = load_labels(options.reference_path);
    std::set<std::string> reference_judges;
    std::map<std::string, LabelValue> by_comment;
    for (const LabelRecord& r : reference_records) {
      reference_judges.insert(r.judge_id);
      by_comment[r.comment_id] = r.label;
    }
    if (reference_judges.size() != 1) {
      throw Error("cmd_analyze: reference file must carry exactly one judge id");
    }
    std::vector<LabelValue> reference;
    reference.reserve(items.size());
    for (const std::string& item : items) {
      auto it = by_comment.find(item);
      if (it == by_comment.end()) {
        throw Error("cmd_analyze: reference file is missing comment \"" + item + "\"");
      }
      reference.push_back(it->second);
    }
    inputs.reference = std::move(reference);
  }

  inputs.abstentions = load_abstentions(options.stats_files);
  inputs.summary_consistency = load_consistency_stats(options.consistency_path);

  Report report = build_report(inputs);
  if (!config.out_dir.empty()) write_report_files(report, config.out_dir);
  return report;
}

}  // namespace judgekit
