#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judgekit/error.hpp"

namespace judgekit {

// The six comment categories. Every comment carries exactly one.
enum class Topic {
  PresidentialOffice,
  NationalAssemblyParties,
  NorthKorea,
  Administration,
  DefenseForeignAffairs,
  GeneralPolitics,
};

inline constexpr std::size_t kTopicCount = 6;

const std::vector<Topic>& all_topics();
std::string to_string(Topic topic);
// Accepts the snake_case tokens ("presidential_office", ...), case-insensitive.
Topic topic_from_string(const std::string& token);

enum class LabelValue { Offensive, NonOffensive };

std::string to_string(LabelValue value);
// Accepts exactly "offensive" / "non-offensive", case-insensitive.
LabelValue label_from_string(const std::string& token);

struct Comment {
  std::string id;
  std::string article_id;
  Topic topic = Topic::GeneralPolitics;
  std::string text;
};

struct Article {
  std::string id;
  Topic topic = Topic::GeneralPolitics;
  std::string title;
  std::string content;
  std::optional<std::string> summary;
};

struct LabelRecord {
  std::string judge_id;
  std::string comment_id;
  LabelValue label = LabelValue::NonOffensive;
};

// Complete judges x items grid of binary labels. Rows (judges) and columns
// (items) are kept in sorted-id order; there are no missing cells.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  // values is row-major with judges.size() * items.size() entries.
  LabelMatrix(std::vector<std::string> judges, std::vector<std::string> items,
              std::vector<LabelValue> values);

  std::size_t n_judges() const { return judges_.size(); }
  std::size_t n_items() const { return items_.size(); }
  const std::vector<std::string>& judges() const { return judges_; }
  const std::vector<std::string>& items() const { return items_; }

  LabelValue at(std::size_t judge, std::size_t item) const;
  std::span<const LabelValue> row(std::size_t judge) const;
  std::size_t judge_index(const std::string& judge_id) const;

  LabelMatrix without_judge(std::size_t judge) const;
  LabelMatrix select_items(const std::vector<std::size_t>& columns) const;

 private:
  std::vector<std::string> judges_;
  std::vector<std::string> items_;
  std::vector<LabelValue> values_;
};

enum class CorpusFormat { Jsonl };

struct CorpusLoadResult {
  std::vector<Article> articles;  // sorted by id
  std::vector<Comment> comments;  // sorted by id
  std::vector<std::string> warnings;
};

// Reads a line-delimited corpus file. Article records look like
//   {"kind":"article","id":...,"topic":...,"title":...,"content":...,"summary"?}
// and comment records
//   {"kind":"comment","id":...,"article_id":...,"topic":...,"text":...}.
// Malformed records, duplicate ids and unknown topics are errors (with line
// numbers); comments pointing at unknown articles only produce warnings.
CorpusLoadResult load_corpus(const std::string& path,
                             CorpusFormat format = CorpusFormat::Jsonl);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t codepoint_count(const std::string& utf8_text);

// Keeps comments whose codepoint count c satisfies min_chars <= c <= max_chars.
// Order is preserved. Requires 1 <= min_chars <= max_chars.
std::vector<Comment> filter_by_length(const std::vector<Comment>& comments,
                                      std::size_t min_chars,
                                      std::size_t max_chars);

// Reads judge labels from a .jsonl file ({"judge_id","comment_id","label"})
// or a .csv file with a header naming those three columns. Identical
// duplicates are collapsed; conflicting duplicates are an error naming both
// lines.
std::vector<LabelRecord> load_labels(const std::string& path);

// Builds the complete judges x items matrix from loose records. Every
// requested (judge, item) cell must be present; the error message lists all
// missing cells. Row/column order is sorted regardless of input order.
LabelMatrix align_matrix(const std::vector<LabelRecord>& records,
                         std::vector<std::string> judges,
                         std::vector<std::string> items);

}  // namespace judgekit
