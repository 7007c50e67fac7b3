#include "judgekit/chat.hpp"

#include <cstdlib>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "httplib.h"

#include "internal/strings.hpp"

namespace judgekit {

using nlohmann::json;
using internal::trim;

void JudgeConfig::validate() const {
  if (judge_id.empty()) throw Error("judge config: judge_id must be nonempty");
  if (model_name.empty()) throw Error("judge config \"" + judge_id + "\": model_name must be nonempty");
  if (temperature < 0.0) throw Error("judge config \"" + judge_id + "\": temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw Error("judge config \"" + judge_id + "\": top_p must be in (0, 1]");
  if (summary_temperature < 0.0) throw Error("judge config \"" + judge_id + "\": summary_temperature must be >= 0");
  if (!(summary_top_p > 0.0 && summary_top_p <= 1.0)) throw Error("judge config \"" + judge_id + "\": summary_top_p must be in (0, 1]");
  if (max_tokens < 1) throw Error("judge config \"" + judge_id + "\": max_tokens must be >= 1");
  if (max_retries < 0) throw Error("judge config \"" + judge_id + "\": max_retries must be >= 0");
  if (concurrency_limit < 1) throw Error("judge config \"" + judge_id + "\": concurrency_limit must be >= 1");
}

std::vector<JudgeConfig> load_judge_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open judge config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("judges") || !j.at("judges").is_array()) {
    throw Error("judge config file must be a JSON object with a \"judges\" array: " + path);
  }
  std::vector<JudgeConfig> configs;
  for (const json& entry : j.at("judges")) {
    if (!entry.is_object()) throw Error("judge config entries must be objects: " + path);
    JudgeConfig c;
    c.judge_id = entry.value("judge_id", "");
    c.endpoint = entry.value("endpoint", "");
    c.model_name = entry.value("model_name", "");
    c.temperature = entry.value("temperature", c.temperature);
    c.top_p = entry.value("top_p", c.top_p);
    c.summary_temperature = entry.value("summary_temperature", c.summary_temperature);
    c.summary_top_p = entry.value("summary_top_p", c.summary_top_p);
    c.max_tokens = entry.value("max_tokens", c.max_tokens);
    c.max_retries = entry.value("max_retries", c.max_retries);
    c.concurrency_limit = entry.value("concurrency_limit", c.concurrency_limit);
    c.validate();
    configs.push_back(std::move(c));
  }
  if (configs.empty()) throw Error("judge config file lists no judges: " + path);
  return configs;
}

namespace {

json message_to_json(const ChatMessage& m) {
  return json{{"role", to_string(m.role)}, {"content", m.content}};
}

}  // namespace

HttpChatClient::HttpChatClient(std::string endpoint_url) {
  const std::size_t scheme = endpoint_url.find("://");
  if (scheme == std::string::npos) {
    throw Error("endpoint URL must include a scheme: " + endpoint_url);
  }
  const std::size_t path_start = endpoint_url.find('/', scheme + 3);
  if (path_start == std::string::npos) {
    base_ = endpoint_url;
    path_ = "/";
  } else {
    base_ = endpoint_url.substr(0, path_start);
    path_ = endpoint_url.substr(path_start);
  }
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["messages"] = json::array();
  for (const ChatMessage& m : request.messages) body["messages"].push_back(message_to_json(m));
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  body["max_tokens"] = request.max_tokens;

  httplib::Client client(base_);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(kApiKeyEnvVar); key != nullptr && key[0] != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Result res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("request to " + base_ + path_ + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("request to " + base_ + path_ + " returned HTTP " +
                         std::to_string(res->status));
  }
  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || !reply.at("choices").is_array() ||
      reply.at("choices").empty()) {
    throw TransportError("unreadable response body from " + base_ + path_);
  }
  const json& first = reply.at("choices").at(0);
  if (!first.contains("message") || !first.at("message").contains("content") ||
      !first.at("message").at("content").is_string()) {
    throw TransportError("response carries no assistant text: " + base_ + path_);
  }
  return first.at("message").at("content").get<std::string>();
}

MockReply MockReply::text(std::string content) {
  MockReply r;
  r.content = std::move(content);
  return r;
}

MockReply MockReply::transport_failure(std::string why) {
  MockReply r;
  r.fail = true;
  r.content = std::move(why);
  return r;
}

MockChatClient::MockChatClient(Responder responder) : responder_(std::move(responder)) {}

MockChatClient::MockChatClient(std::string fixed_reply)
    : responder_([reply = std::move(fixed_reply)](const ChatRequest&, int) {
        return MockReply::text(reply);
      }) {}

MockChatClient MockChatClient::sequence(std::vector<MockReply> script) {
  return MockChatClient([script = std::move(script)](const ChatRequest&, int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= script.size()) {
      throw Error("mock script exhausted at call " + std::to_string(index));
    }
    return script[static_cast<std::size_t>(index)];
  });
}

std::string MockChatClient::complete(const ChatRequest& request) {
  MockReply reply;
  {
    std::lock_guard lock(mutex_);
    const int index = static_cast<int>(calls_.size());
    calls_.push_back(request);
    reply = responder_(request, index);
  }
  if (reply.fail) throw TransportError(reply.content);
  return reply.content;
}

int MockChatClient::call_count() const {
  std::lock_guard lock(mutex_);
  return static_cast<int>(calls_.size());
}

std::vector<ChatRequest> MockChatClient::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

MockChatClient::Responder load_mock_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mock rule file: " + path);

  struct Rule {
    std::string model;          // empty -> any
    std::string when_contains;  // empty -> any
    bool fail = false;
    std::string reply;
  };
  std::vector<Rule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(path + ":" + std::to_string(line_no) + ": malformed mock rule");
    }
    Rule r;
    r.model = j.value("model", "");
    r.when_contains = j.value("when_contains", "");
    r.fail = j.value("fail", false);
    r.reply = j.value("reply", "");
    if (!r.fail && r.reply.empty() && !j.contains("reply")) {
      throw Error(path + ":" + std::to_string(line_no) + ": mock rule needs \"reply\" or \"fail\"");
    }
    rules.push_back(std::move(r));
  }
  if (rules.empty()) throw Error("mock rule file lists no rules: " + path);

  return [rules](const ChatRequest& request, int) -> MockReply {
    std::string haystack;
    for (const ChatMessage& m : request.messages) {
      haystack += m.content;
      haystack += '\n';
    }
    for (const Rule& r : rules) {
      if (!r.model.empty() && r.model != request.model) continue;
      if (!r.when_contains.empty() && haystack.find(r.when_contains) == std::string::npos) continue;
      if (r.fail) return MockReply::transport_failure("mock rule failure");
      return MockReply::text(r.reply);
    }
    throw Error("no mock rule matched a request for model \"" + request.model + "\"");
  };
}

}  // namespace judgekit
