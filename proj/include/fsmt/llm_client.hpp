// Copyright 2026 The FSMT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSMT_LLM_CLIENT_HPP_
#define FSMT_LLM_CLIENT_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace fsmt {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string model = "gpt-4";
  std::vector<ChatMessage> messages;
  double temperature = 0.0;

  // Throws Error(kInvalidRequest).
  void validate() const;
  // OpenAI chat-completions body with keys in the fixed order
  // model, messages[{role, content}], temperature.
  std::string to_json() const;
};

struct ChatResponse {
  std::string content;
  std::string finish_reason;
  int raw_status = 0;
};

// Pulls choices[0].message.content (and finish_reason) out of a response
// body. Throws Error(kMalformedResponse).
ChatResponse parse_chat_response(std::string_view body, int status);

struct BackoffPolicy {
  int max_attempts = 3;
  long long base_delay_ms = 500;
  double multiplier = 2.0;
  long long max_delay_ms = 8000;

  void validate() const;
};

// min(base * multiplier^(attempt-1), max), truncated to whole milliseconds.
long long compute_backoff(const BackoffPolicy& policy, int attempt);

constexpr bool is_retryable_status(int status) {
  return status == 0 || status == 429 || (status >= 500 && status <= 599);
}

// What a transport saw on the wire; status 0 means no HTTP response at all.
struct HttpReply {
  int status = 0;
  std::string body;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpReply post(const std::string& body) = 0;
};

// POSTs to an http:// or https:// chat-completions URL.
class HttpTransport : public ChatTransport {
 public:
  HttpTransport(std::string endpoint, std::string auth_token,
                std::chrono::seconds timeout = std::chrono::seconds(120));
  HttpReply post(const std::string& body) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string auth_token_;
  std::chrono::seconds timeout_;
};

enum class UnknownKeyPolicy { kEcho, kNotFound };

// Replays canned responses from <dir>/<sha256-of-request-body>.json. A file is
// either a response body (served with status 200) or
//   {"responses": [{"status": 429}, {"status": 200, "body": {...}}]}
// served in order, the last entry repeating. Keys without a file are echoed
// (the last user message becomes the reply) or answered with 404.
class MockTransport : public ChatTransport {
 public:
  // Throws Error(kIo) naming the directory when it does not exist.
  explicit MockTransport(std::filesystem::path dir,
                         UnknownKeyPolicy unknown = UnknownKeyPolicy::kEcho);
  HttpReply post(const std::string& body) override;

  std::size_t call_count() const { return calls_.load(); }
  const std::filesystem::path& dir() const { return dir_; }

  static std::string key_for(std::string_view body);

 private:
  std::filesystem::path dir_;
  UnknownKeyPolicy unknown_;
  std::atomic<std::size_t> calls_{0};
  std::mutex mu_;
  std::map<std::string, std::size_t> cursors_;
};

// Builds a chat-completions response body carrying `content`.
std::string make_response_body(std::string_view content,
                               std::string_view finish_reason = "stop");

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Token bucket admitting `requests_per_minute` calls (0 disables it). A
// caller reserves a slot under the lock and sleeps outside it.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute, Sleeper sleeper);
  void acquire();

 private:
  double per_ms_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  Sleeper sleeper_;
  std::mutex mu_;
};

struct ClientOptions {
  BackoffPolicy policy;
  double requests_per_minute = 0;
  Sleeper sleeper;                               // defaults to this_thread::sleep_for
  std::function<void(std::string_view)> logger;  // retry notices; may be empty
};

// Safe to share between threads as long as the transport is.
class ChatClient {
 public:
  ChatClient(std::shared_ptr<ChatTransport> transport, ClientOptions options);

  // Retries transport failures, 429 and 5xx with backoff. Throws
  // StatusError(kExhaustedRetries | kNonRetryableStatus) or
  // Error(kMalformedResponse).
  ChatResponse send(const ChatRequest& request);

  ChatTransport& transport() { return *transport_; }

 private:
  std::shared_ptr<ChatTransport> transport_;
  ClientOptions options_;
  RateLimiter limiter_;
};

ChatResponse send_chat(const std::string& endpoint,
                       const std::string& auth_token,
                       const ChatRequest& request,
                       const BackoffPolicy& policy);

// Reduces a reply to the bare translation: trim, drop a leading
// "Translation:" label, unwrap one pair of enclosing quotes.
// Throws Error(kEmptyCandidate).
std::string extract_candidate(std::string_view content);

std::string sha256_hex(std::string_view data);

}  // namespace fsmt

#endif  // FSMT_LLM_CLIENT_HPP_
