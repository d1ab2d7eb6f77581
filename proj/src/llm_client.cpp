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

#include "fsmt/llm_client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fsmt/corpus.hpp"
#include "fsmt/error.hpp"
#include "fsmt/unicode.hpp"

namespace fsmt {

using nlohmann::json;
using nlohmann::ordered_json;

void ChatRequest::validate() const {
  if (model.empty()) throw Error(ErrorKind::kInvalidRequest, "model is empty");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorKind::kInvalidRequest, "temperature must lie in [0, 2]");
  }
  bool has_user = false;
  for (const auto& m : messages) {
    if (m.role != "system" && m.role != "user" && m.role != "assistant") {
      throw Error(ErrorKind::kInvalidRequest, "unknown role '" + m.role + "'");
    }
    if (m.content.empty()) {
      throw Error(ErrorKind::kInvalidRequest, "message content is empty");
    }
    has_user = has_user || m.role == "user";
  }
  if (!has_user) {
    throw Error(ErrorKind::kInvalidRequest, "request has no user message");
  }
}

std::string ChatRequest::to_json() const {
  ordered_json body;
  body["model"] = model;
  body["messages"] = ordered_json::array();
  for (const auto& m : messages) {
    ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    body["messages"].push_back(std::move(msg));
  }
  body["temperature"] = temperature;
  return body.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

ChatResponse parse_chat_response(std::string_view body, int status) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kMalformedResponse, "response body is not a JSON object");
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw Error(ErrorKind::kMalformedResponse, "response has no choices");
  }
  const json& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message") ||
      !first["message"].is_object() || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw Error(ErrorKind::kMalformedResponse,
                "response lacks choices[0].message.content");
  }
  ChatResponse out;
  out.content = first["message"]["content"].get<std::string>();
  if (first.contains("finish_reason") && first["finish_reason"].is_string()) {
    out.finish_reason = first["finish_reason"].get<std::string>();
  }
  out.raw_status = status;
  return out;
}

std::string make_response_body(std::string_view content,
                               std::string_view finish_reason) {
  ordered_json message;
  message["role"] = "assistant";
  message["content"] = std::string(content);
  ordered_json choice;
  choice["index"] = 0;
  choice["message"] = std::move(message);
  choice["finish_reason"] = std::string(finish_reason);
  ordered_json body;
  body["object"] = "chat.completion";
  body["choices"] = ordered_json::array({std::move(choice)});
  return body.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void BackoffPolicy::validate() const {
  if (max_attempts < 1) {
    throw Error(ErrorKind::kInvalidConfig, "max_attempts must be >= 1");
  }
  if (base_delay_ms < 0 || base_delay_ms > max_delay_ms) {
    throw Error(ErrorKind::kInvalidConfig,
                "need 0 <= base_delay_ms <= max_delay_ms");
  }
  if (!(multiplier >= 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "multiplier must be >= 1");
  }
}

long long compute_backoff(const BackoffPolicy& policy, int attempt) {
  if (attempt < 1 || attempt > policy.max_attempts) {
    throw Error(ErrorKind::kAttemptOutOfRange,
                "attempt " + std::to_string(attempt) + " outside [1, " +
                    std::to_string(policy.max_attempts) + "]");
  }
  const double raw = static_cast<double>(policy.base_delay_ms) *
                     std::pow(policy.multiplier, attempt - 1);
  const double capped = std::min(raw, static_cast<double>(policy.max_delay_ms));
  return static_cast<long long>(capped);
}

// ---------------------------------------------------------------------------
// HTTP

HttpTransport::HttpTransport(std::string endpoint, std::string auth_token,
                             std::chrono::seconds timeout)
    : auth_token_(std::move(auth_token)), timeout_(timeout) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, kUrl)) {
    throw Error(ErrorKind::kInvalidConfig,
                "endpoint must be an http(s) URL: " + endpoint);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
}

HttpReply HttpTransport::post(const std::string& body) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!auth_token_.empty()) {
    headers.emplace("Authorization", "Bearer " + auth_token_);
  }
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) return {0, httplib::to_string(res.error())};
  return {res->status, res->body};
}

// ---------------------------------------------------------------------------
// Mock

MockTransport::MockTransport(std::filesystem::path dir, UnknownKeyPolicy unknown)
    : dir_(std::move(dir)), unknown_(unknown) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) {
    throw Error(ErrorKind::kIo, "mock directory not found: " + dir_.string());
  }
}

std::string MockTransport::key_for(std::string_view body) {
  return sha256_hex(body);
}

HttpReply MockTransport::post(const std::string& body) {
  ++calls_;
  const std::string key = key_for(body);
  const auto path = dir_ / (key + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    if (unknown_ == UnknownKeyPolicy::kNotFound) {
      return {404, R"({"error":"no canned response for )" + key + "\"}"};
    }
    json request = json::parse(body, nullptr, false);
    if (request.is_discarded() || !request.contains("messages")) {
      return {400, R"({"error":"request is not a chat body"})"};
    }
    std::string last_user;
    for (const auto& m : request["messages"]) {
      if (m.value("role", "") == "user") last_user = m.value("content", "");
    }
    return {200, make_response_body(last_user)};
  }

  json canned = json::parse(read_file(path), nullptr, false);
  if (canned.is_discarded()) return {500, R"({"error":"bad canned file"})"};
  if (!canned.is_object() || !canned.contains("responses")) {
    return {200, canned.dump()};
  }
  const json& seq = canned["responses"];
  if (!seq.is_array() || seq.empty()) {
    return {500, R"({"error":"empty canned sequence"})"};
  }
  std::size_t at = 0;
  {
    std::lock_guard lock(mu_);
    at = cursors_[key]++;
  }
  const json& entry = seq[std::min(at, seq.size() - 1)];
  HttpReply reply;
  reply.status = entry.value("status", 200);
  if (entry.contains("body")) {
    reply.body = entry["body"].is_string() ? entry["body"].get<std::string>()
                                           : entry["body"].dump();
  }
  return reply;
}

// ---------------------------------------------------------------------------
// Client

namespace {

void default_sleep(std::chrono::milliseconds d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

}  // namespace

RateLimiter::RateLimiter(double requests_per_minute, Sleeper sleeper)
    : per_ms_(requests_per_minute > 0 ? requests_per_minute / 60000.0 : 0.0),
      tokens_(1.0),
      last_(std::chrono::steady_clock::now()),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper(default_sleep)) {}

void RateLimiter::acquire() {
  if (per_ms_ <= 0) return;
  double wait_ms = 0;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    const double elapsed =
        std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    tokens_ = std::min(1.0, tokens_ + elapsed * per_ms_);
    tokens_ -= 1.0;
    if (tokens_ < 0) wait_ms = -tokens_ / per_ms_;
  }
  if (wait_ms > 0) {
    sleeper_(std::chrono::milliseconds(static_cast<long long>(std::ceil(wait_ms))));
  }
}

ChatClient::ChatClient(std::shared_ptr<ChatTransport> transport,
                       ClientOptions options)
    : transport_(std::move(transport)),
      options_(std::move(options)),
      limiter_(options_.requests_per_minute, options_.sleeper) {
  options_.policy.validate();
  if (!options_.sleeper) options_.sleeper = default_sleep;
}

ChatResponse ChatClient::send(const ChatRequest& request) {
  request.validate();
  const std::string body = request.to_json();
  const BackoffPolicy& policy = options_.policy;
  int last_status = 0;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    limiter_.acquire();
    HttpReply reply = transport_->post(body);
    if (reply.status >= 200 && reply.status < 300) {
      return parse_chat_response(reply.body, reply.status);
    }
    if (!is_retryable_status(reply.status)) {
      throw StatusError(ErrorKind::kNonRetryableStatus, reply.status,
                        "chat endpoint returned non-retryable status " +
                            std::to_string(reply.status));
    }
    last_status = reply.status;
    if (attempt < policy.max_attempts) {
      const long long delay = compute_backoff(policy, attempt);
      if (options_.logger) {
        options_.logger("attempt " + std::to_string(attempt) + " failed (" +
                        (reply.status == 0 ? "transport error"
                                           : "status " + std::to_string(reply.status)) +
                        "), retrying in " + std::to_string(delay) + " ms");
      }
      options_.sleeper(std::chrono::milliseconds(delay));
    }
  }
  throw StatusError(ErrorKind::kExhaustedRetries, last_status,
                    "giving up after " + std::to_string(policy.max_attempts) +
                        " attempts (last status " + std::to_string(last_status) +
                        ")");
}

ChatResponse send_chat(const std::string& endpoint,
                       const std::string& auth_token,
                       const ChatRequest& request,
                       const BackoffPolicy& policy) {
  ClientOptions options;
  options.policy = policy;
  ChatClient client(std::make_shared<HttpTransport>(endpoint, auth_token),
                    std::move(options));
  return client.send(request);
}

// ---------------------------------------------------------------------------
// Candidate extraction

namespace {

bool starts_with_icase(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const auto a = static_cast<unsigned char>(text[i]);
    const auto b = static_cast<unsigned char>(prefix[i]);
    if (std::tolower(a) != std::tolower(b)) return false;
  }
  return true;
}

}  // namespace

std::string extract_candidate(std::string_view content) {
  std::string_view text = unicode::trim(content);
  constexpr std::string_view kLabel = "translation:";
  if (starts_with_icase(text, kLabel)) {
    text.remove_prefix(kLabel.size());
    text = unicode::trim(text);
  }
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 5>
      kQuotes = {{{"\"", "\""},
                  {"'", "'"},
                  {"“", "”"},
                  {"«", "»"},
                  {"「", "」"}}};
  for (const auto& [open, close] : kQuotes) {
    if (text.size() >= open.size() + close.size() && text.starts_with(open) &&
        text.ends_with(close)) {
      text = text.substr(open.size(), text.size() - open.size() - close.size());
      text = unicode::trim(text);
      break;
    }
  }
  if (text.empty()) {
    throw Error(ErrorKind::kEmptyCandidate, "no translation left in the response");
  }
  return std::string(text);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace fsmt
