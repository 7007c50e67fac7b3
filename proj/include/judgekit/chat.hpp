#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "judgekit/prompts.hpp"

namespace judgekit {

// One judge endpoint. temperature/top_p drive classification and debate
// calls; summary_temperature/summary_top_p drive summary generation.
struct JudgeConfig {
  std::string judge_id;
  std::string endpoint;
  std::string model_name;
  double temperature = 0.0;
  double top_p = 1.0;
  double summary_temperature = 0.3;
  double summary_top_p = 0.5;
  int max_tokens = 512;
  int max_retries = 2;
  int concurrency_limit = 1;

  void validate() const;
};

// JSON config file: {"judges":[{...}, ...]}. Missing fields keep defaults.
std::vector<JudgeConfig> load_judge_configs(const std::string& path);

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 512;
};

// A chat-completion backend. complete() returns the first choice's assistant
// text and throws TransportError when the endpoint cannot be reached, returns
// a non-2xx status, or replies with an unreadable body.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Name of the environment variable holding the bearer token, if any.
inline constexpr const char* kApiKeyEnvVar = "JUDGEKIT_API_KEY";

// POSTs {model, messages, temperature, top_p, max_tokens} to the configured
// URL and reads choices[0].message.content. Stateless, safe to share across
// threads.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(std::string endpoint_url);
  std::string complete(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

// Scripted reply for the mock client.
struct MockReply {
  static MockReply text(std::string content);
  static MockReply transport_failure(std::string why = "mock transport failure");

  bool fail = false;
  std::string content;
};

// Deterministic in-process stand-in for an endpoint. Replies come from a
// responder callback; every request is recorded in a thread-safe call log.
class MockChatClient : public ChatClient {
 public:
  using Responder = std::function<MockReply(const ChatRequest& request, int call_index)>;

  explicit MockChatClient(Responder responder);
  // Always replies with the same text.
  explicit MockChatClient(std::string fixed_reply);
  // Replays replies in order; throws once the script is exhausted.
  static MockChatClient sequence(std::vector<MockReply> script);

  std::string complete(const ChatRequest& request) override;

  int call_count() const;
  std::vector<ChatRequest> calls() const;

 private:
  mutable std::mutex mutex_;
  Responder responder_;
  std::vector<ChatRequest> calls_;
};

// Loads a rule-based responder from a line-delimited JSON file. Each rule is
// {"reply": str} with optional "model" (exact match on the request model),
// "when_contains" (substring of the concatenated message contents) and
// "fail": true (inject a transport failure). The first matching rule wins; a
// request matching no rule is an error.
MockChatClient::Responder load_mock_rules(const std::string& path);

}  // namespace judgekit
