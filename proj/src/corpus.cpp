#include "judgekit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "internal/strings.hpp"

namespace judgekit {

using nlohmann::json;
using internal::join;
using internal::split;
using internal::to_lower;
using internal::trim;

const std::vector<Topic>& all_topics() {
  static const std::vector<Topic> topics = {
      Topic::PresidentialOffice,    Topic::NationalAssemblyParties,
      Topic::NorthKorea,            Topic::Administration,
      Topic::DefenseForeignAffairs, Topic::GeneralPolitics,
  };
  return topics;
}

std::string to_string(Topic topic) {
  switch (topic) {
    case Topic::PresidentialOffice: return "presidential_office";
    case Topic::NationalAssemblyParties: return "national_assembly_parties";
    case Topic::NorthKorea: return "north_korea";
    case Topic::Administration: return "administration";
    case Topic::DefenseForeignAffairs: return "defense_foreign_affairs";
    case Topic::GeneralPolitics: return "general_politics";
  }
  throw Error("invalid Topic value");
}

Topic topic_from_string(const std::string& token) {
  const std::string t = to_lower(trim(token));
  for (Topic topic : all_topics()) {
    if (t == to_string(topic)) return topic;
  }
  throw Error("unknown topic \"" + token + "\"");
}

std::string to_string(LabelValue value) {
  return value == LabelValue::Offensive ? "offensive" : "non-offensive";
}

LabelValue label_from_string(const std::string& token) {
  const std::string t = to_lower(trim(token));
  if (t == "offensive") return LabelValue::Offensive;
  if (t == "non-offensive") return LabelValue::NonOffensive;
  throw Error("unknown label \"" + token + "\" (expected \"offensive\" or \"non-offensive\")");
}

LabelMatrix::LabelMatrix(std::vector<std::string> judges, std::vector<std::string> items,
                         std::vector<LabelValue> values)
    : judges_(std::move(judges)), items_(std::move(items)), values_(std::move(values)) {
  if (values_.size() != judges_.size() * items_.size()) {
    throw Error("LabelMatrix: value count does not match judges x items");
  }
}

LabelValue LabelMatrix::at(std::size_t judge, std::size_t item) const {
  if (judge >= n_judges() || item >= n_items()) throw Error("LabelMatrix::at: index out of range");
  return values_[judge * n_items() + item];
}

std::span<const LabelValue> LabelMatrix::row(std::size_t judge) const {
  if (judge >= n_judges()) throw Error("LabelMatrix::row: index out of range");
  return {values_.data() + judge * n_items(), n_items()};
}

std::size_t LabelMatrix::judge_index(const std::string& judge_id) const {
  auto it = std::find(judges_.begin(), judges_.end(), judge_id);
  if (it == judges_.end()) throw Error("LabelMatrix: unknown judge \"" + judge_id + "\"");
  return static_cast<std::size_t>(it - judges_.begin());
}

LabelMatrix LabelMatrix::without_judge(std::size_t judge) const {
  if (judge >= n_judges()) throw Error("LabelMatrix::without_judge: index out of range");
  std::vector<std::string> judges;
  std::vector<LabelValue> values;
  judges.reserve(n_judges() - 1);
  values.reserve((n_judges() - 1) * n_items());
  for (std::size_t i = 0; i < n_judges(); ++i) {
    if (i == judge) continue;
    judges.push_back(judges_[i]);
    auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return LabelMatrix(std::move(judges), items_, std::move(values));
}

LabelMatrix LabelMatrix::select_items(const std::vector<std::size_t>& columns) const {
  std::vector<std::string> items;
  items.reserve(columns.size());
  for (std::size_t c : columns) {
    if (c >= n_items()) throw Error("LabelMatrix::select_items: column out of range");
    items.push_back(items_[c]);
  }
  std::vector<LabelValue> values;
  values.reserve(n_judges() * columns.size());
  for (std::size_t i = 0; i < n_judges(); ++i) {
    for (std::size_t c : columns) values.push_back(at(i, c));
  }
  return LabelMatrix(judges_, std::move(items), std::move(values));
}

namespace {

std::string location(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

json parse_json_line(const std::string& path, std::size_t line_no, const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(location(path, line_no) + ": malformed record");
  }
  return j;
}

std::string require_string(const json& j, const char* key, const std::string& path,
                           std::size_t line_no) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(location(path, line_no) + ": malformed record: missing string field \"" +
                key + "\"");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

CorpusLoadResult load_corpus(const std::string& path, CorpusFormat format) {
  if (format != CorpusFormat::Jsonl) throw Error("load_corpus: unsupported format");
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);

  CorpusLoadResult result;
  std::set<std::string> article_ids;
  std::set<std::string> comment_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = parse_json_line(path, line_no, line);
    const std::string kind = require_string(j, "kind", path, line_no);
    Topic topic;
    try {
      topic = topic_from_string(require_string(j, "topic", path, line_no));
    } catch (const Error& e) {
      throw Error(location(path, line_no) + ": " + e.what());
    }
    if (kind == "article") {
      Article a;
      a.id = require_string(j, "id", path, line_no);
      a.topic = topic;
      a.title = require_string(j, "title", path, line_no);
      a.content = require_string(j, "content", path, line_no);
      if (j.contains("summary") && j.at("summary").is_string()) {
        a.summary = j.at("summary").get<std::string>();
      }
      if (!article_ids.insert(a.id).second) {
        throw Error(location(path, line_no) + ": duplicate article id \"" + a.id + "\"");
      }
      result.articles.push_back(std::move(a));
    } else if (kind == "comment") {
      Comment c;
      c.id = require_string(j, "id", path, line_no);
      c.article_id = require_string(j, "article_id", path, line_no);
      c.topic = topic;
      c.text = require_string(j, "text", path, line_no);
      if (!comment_ids.insert(c.id).second) {
        throw Error(location(path, line_no) + ": duplicate comment id \"" + c.id + "\"");
      }
      result.comments.push_back(std::move(c));
    } else {
      throw Error(location(path, line_no) + ": malformed record: unknown kind \"" + kind + "\"");
    }
  }

  std::sort(result.articles.begin(), result.articles.end(),
            [](const Article& a, const Article& b) { return a.id < b.id; });
  std::sort(result.comments.begin(), result.comments.end(),
            [](const Comment& a, const Comment& b) { return a.id < b.id; });

  for (const Comment& c : result.comments) {
    if (!article_ids.count(c.article_id)) {
      result.warnings.push_back("comment \"" + c.id + "\" references unknown article \"" +
                                c.article_id + "\"");
    }
  }
  return result;
}

std::size_t codepoint_count(const std::string& utf8_text) {
  std::size_t n = 0;
  for (unsigned char c : utf8_text) {
    if ((c & 0xC0) != 0x80) ++n;  // count non-continuation bytes
  }
  return n;
}

std::vector<Comment> filter_by_length(const std::vector<Comment>& comments,
                                      std::size_t min_chars, std::size_t max_chars) {
  if (min_chars < 1) throw Error("filter_by_length: min_chars must be >= 1");
  if (min_chars > max_chars) throw Error("filter_by_length: min_chars exceeds max_chars");
  std::vector<Comment> kept;
  for (const Comment& c : comments) {
    const std::size_t n = codepoint_count(c.text);
    if (n >= min_chars && n <= max_chars) kept.push_back(c);
  }
  return kept;
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<LabelRecord> load_labels_csv(const std::string& path, std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) return {};
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const std::vector<std::string> columns = split(header, ',');
  int idx_judge = -1, idx_comment = -1, idx_label = -1;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::string name = to_lower(trim(columns[i]));
    if (name == "judge_id") idx_judge = static_cast<int>(i);
    else if (name == "comment_id") idx_comment = static_cast<int>(i);
    else if (name == "label") idx_label = static_cast<int>(i);
  }
  if (idx_judge < 0 || idx_comment < 0 || idx_label < 0) {
    throw Error(path + ":1: CSV header must name judge_id, comment_id and label columns");
  }

  std::vector<LabelRecord> records;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) <= std::max({idx_judge, idx_comment, idx_label})) {
      throw Error(location(path, line_no) + ": malformed record: too few columns");
    }
    LabelRecord r;
    r.judge_id = trim(fields[idx_judge]);
    r.comment_id = trim(fields[idx_comment]);
    try {
      r.label = label_from_string(fields[idx_label]);
    } catch (const Error& e) {
      throw Error(location(path, line_no) + ": " + e.what());
    }
    records.push_back(std::move(r));
    lines.push_back(line_no);
  }

  // Duplicate handling shared with the JSONL path happens in the caller.
  std::vector<LabelRecord> out;
  std::map<std::pair<std::string, std::string>, std::pair<LabelValue, std::size_t>> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto key = std::make_pair(records[i].judge_id, records[i].comment_id);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, std::make_pair(records[i].label, lines[i]));
      out.push_back(records[i]);
    } else if (it->second.first != records[i].label) {
      throw Error(path + ": conflicting labels for (" + key.first + ", " + key.second +
                  ") on lines " + std::to_string(it->second.second) + " and " +
                  std::to_string(lines[i]));
    }
  }
  return out;
}

}  // namespace

std::vector<LabelRecord> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  if (has_suffix(to_lower(path), ".csv")) return load_labels_csv(path, in);

  std::vector<LabelRecord> out;
  std::map<std::pair<std::string, std::string>, std::pair<LabelValue, std::size_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = parse_json_line(path, line_no, line);
    LabelRecord r;
    r.judge_id = require_string(j, "judge_id", path, line_no);
    r.comment_id = require_string(j, "comment_id", path, line_no);
    try {
      r.label = label_from_string(require_string(j, "label", path, line_no));
    } catch (const Error& e) {
      throw Error(location(path, line_no) + ": " + e.what());
    }
    const auto key = std::make_pair(r.judge_id, r.comment_id);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, std::make_pair(r.label, line_no));
      out.push_back(std::move(r));
    } else if (it->second.first != r.label) {
      throw Error(path + ": conflicting labels for (" + key.first + ", " + key.second +
                  ") on lines " + std::to_string(it->second.second) + " and " +
                  std::to_string(line_no));
    }
  }
  return out;
}

LabelMatrix align_matrix(const std::vector<LabelRecord>& records,
                         std::vector<std::string> judges, std::vector<std::string> items) {
  if (judges.empty() || items.empty()) {
    throw Error("align_matrix: judges and items must be nonempty");
  }
  std::sort(judges.begin(), judges.end());
  judges.erase(std::unique(judges.begin(), judges.end()), judges.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());

  std::map<std::pair<std::string, std::string>, LabelValue> cells;
  for (const LabelRecord& r : records) {
    const auto key = std::make_pair(r.judge_id, r.comment_id);
    auto it = cells.find(key);
    if (it == cells.end()) {
      cells.emplace(key, r.label);
    } else if (it->second != r.label) {
      throw Error("align_matrix: conflicting labels for (" + r.judge_id + ", " +
                  r.comment_id + ")");
    }
  }

  std::vector<LabelValue> values;
  values.reserve(judges.size() * items.size());
  std::vector<std::string> missing;
  for (const std::string& judge : judges) {
    for (const std::string& item : items) {
      auto it = cells.find(std::make_pair(judge, item));
      if (it == cells.end()) {
        missing.push_back("(" + judge + ", " + item + ")");
        continue;
      }
      values.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw Error("align_matrix: " + std::to_string(missing.size()) + " missing cell(s): " +
                join(missing, ", "));
  }
  return LabelMatrix(std::move(judges), std::move(items), std::move(values));
}

}  // namespace judgekit
