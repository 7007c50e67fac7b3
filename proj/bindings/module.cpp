#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "judgekit/aggregate.hpp"
#include "judgekit/agreement.hpp"
#include "judgekit/corpus.hpp"
#include "judgekit/evaluate.hpp"
#include "judgekit/judges.hpp"
#include "judgekit/prompts.hpp"

namespace py = pybind11;
using namespace judgekit;

namespace {

// The python surface works with plain strings: "offensive"/"non-offensive"
// for labels, "vanilla"/"defn"/... for variants.
std::vector<LabelValue> to_labels(const std::vector<std::string>& tokens) {
  std::vector<LabelValue> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(label_from_string(t));
  return out;
}

LabelMatrix to_matrix(const std::vector<std::vector<std::string>>& rows,
                      std::vector<std::string> judges) {
  if (rows.empty()) throw Error("matrix needs at least one row");
  if (judges.empty()) {
    for (std::size_t i = 0; i < rows.size(); ++i) judges.push_back("j" + std::to_string(i));
  }
  if (judges.size() != rows.size()) throw Error("judge names do not match row count");
  std::vector<std::string> items;
  for (std::size_t j = 0; j < rows[0].size(); ++j) items.push_back("i" + std::to_string(j));
  std::vector<LabelValue> values;
  for (const auto& row : rows) {
    if (row.size() != items.size()) throw Error("matrix rows differ in length");
    for (const std::string& t : row) values.push_back(label_from_string(t));
  }
  return LabelMatrix(std::move(judges), std::move(items), std::move(values));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Offensive-language judge orchestration and agreement auditing";

  py::register_exception<Error>(m, "JudgekitError");

  m.def("codepoint_count", &codepoint_count, py::arg("text"),
        "Number of Unicode scalar values in a UTF-8 string.");

  m.def(
      "parse_verdict",
      [](const std::string& raw) { return to_string(parse_verdict(raw)); }, py::arg("raw"),
      "Maps a raw model reply to 'offensive', 'non-offensive' or 'unparseable'.");

  m.def(
      "majority_vote",
      [](const std::vector<std::string>& labels, const std::string& tie_policy) {
        return to_string(majority_vote(to_labels(labels), tie_policy_from_string(tie_policy)));
      },
      py::arg("labels"), py::arg("tie_policy") = "prefer-non-offensive");

  m.def(
      "pej_aggregate",
      [](const std::vector<std::vector<std::string>>& grid, const std::string& tie_policy) {
        if (grid.empty()) throw Error("pej_aggregate: empty grid");
        PejGrid g = PejGrid::make(grid.size());
        for (const auto& row : grid) {
          if (row.size() != g.variants.size()) {
            throw Error("pej_aggregate: each row needs one label per variant");
          }
          for (const std::string& t : row) g.values.push_back(label_from_string(t));
        }
        const PejResult result = pej_aggregate(g, tie_policy_from_string(tie_policy));
        py::dict per_variant;
        for (const auto& [variant, label] : result.per_variant) {
          per_variant[py::str(to_string(variant))] = to_string(label);
        }
        return py::make_tuple(per_variant, to_string(result.final_label));
      },
      py::arg("grid"), py::arg("tie_policy") = "prefer-non-offensive",
      "Two-stage vote over a models x variants grid; returns (per-variant labels, final).");

  m.def(
      "ground_trust",
      [](const std::string& a, const std::string& b, const std::string& c) {
        return to_string(
            ground_trust(label_from_string(a), label_from_string(b), label_from_string(c)));
      },
      py::arg("sej"), py::arg("pej"), py::arg("mrj"));

  m.def(
      "overlap_ratio",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return overlap_ratio(to_labels(a), to_labels(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "krippendorff_alpha",
      [](const std::vector<std::vector<std::string>>& rows, bool scale_by_100) {
        return krippendorff_alpha(to_matrix(rows, {}), scale_by_100).score;
      },
      py::arg("rows"), py::arg("scale_by_100") = true,
      "Nominal-data agreement over complete judge rows of 'offensive'/'non-offensive'.");

  m.def(
      "loo_deltas",
      [](const std::vector<std::vector<std::string>>& rows, std::vector<std::string> judges,
         bool scale_by_100) {
        const AgreementReport report =
            loo_deltas(to_matrix(rows, std::move(judges)), scale_by_100);
        py::dict deltas;
        for (const auto& [judge, delta] : report.per_judge_delta) {
          deltas[py::str(judge)] = delta;
        }
        py::dict out;
        out["score_total"] = report.score_total;
        out["per_judge_delta"] = deltas;
        out["n_judges"] = report.n_judges;
        out["n_items"] = report.n_items;
        return out;
      },
      py::arg("rows"), py::arg("judges") = std::vector<std::string>{},
      py::arg("scale_by_100") = true);

  m.def(
      "evaluate_metrics",
      [](const std::vector<std::string>& pred, const std::vector<std::string>& ref,
         const std::string& averaging) {
        const MetricsRow row =
            metrics(confusion(to_labels(pred), to_labels(ref)), averaging_from_string(averaging));
        py::dict out;
        out["accuracy"] = row.accuracy;
        out["precision"] = row.precision;
        out["recall"] = row.recall;
        out["f1"] = row.f1;
        out["averaging"] = to_string(row.averaging);
        out["zero_division"] = row.zero_division;
        return out;
      },
      py::arg("pred"), py::arg("ref"), py::arg("averaging") = "macro");

  m.def(
      "render_prompt",
      [](const std::string& variant, const std::string& comment_text, const std::string& summary,
         const std::vector<std::pair<std::string, std::string>>& exemplars,
         const std::string& definition) {
        Comment comment;
        comment.id = "c";
        comment.article_id = "a";
        comment.topic = Topic::GeneralPolitics;
        comment.text = comment_text;
        Article article;
        article.id = "a";
        article.topic = comment.topic;
        if (!summary.empty()) article.summary = summary;
        std::vector<FewShotExemplar> shots;
        for (const auto& [text, label] : exemplars) {
          shots.push_back({comment.topic, text, label_from_string(label)});
        }
        const std::vector<ChatMessage> messages =
            render_prompt(PromptTemplates::defaults(), prompt_variant_from_string(variant),
                          comment, summary.empty() ? nullptr : &article, shots, definition);
        std::vector<std::pair<std::string, std::string>> out;
        for (const ChatMessage& msg : messages) out.emplace_back(to_string(msg.role), msg.content);
        return out;
      },
      py::arg("variant"), py::arg("comment"), py::arg("summary") = "",
      py::arg("exemplars") = std::vector<std::pair<std::string, std::string>>{},
      py::arg("definition") = "",
      "Renders the classification prompt as (role, content) pairs using the default templates.");

  m.def(
      "load_corpus",
      [](const std::string& path) {
        const CorpusLoadResult result = load_corpus(path);
        py::list articles;
        for (const Article& a : result.articles) {
          py::dict d;
          d["id"] = a.id;
          d["topic"] = to_string(a.topic);
          d["title"] = a.title;
          d["content"] = a.content;
          if (a.summary) d["summary"] = *a.summary;
          articles.append(d);
        }
        py::list comments;
        for (const Comment& c : result.comments) {
          py::dict d;
          d["id"] = c.id;
          d["article_id"] = c.article_id;
          d["topic"] = to_string(c.topic);
          d["text"] = c.text;
          comments.append(d);
        }
        return py::make_tuple(articles, comments, result.warnings);
      },
      py::arg("path"), "Loads a corpus file; returns (articles, comments, warnings).");

  m.def(
      "load_labels",
      [](const std::string& path) {
        py::list out;
        for (const LabelRecord& r : load_labels(path)) {
          out.append(py::make_tuple(r.judge_id, r.comment_id, to_string(r.label)));
        }
        return out;
      },
      py::arg("path"));
}
