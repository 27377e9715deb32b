// Copyright 2026 The Pragmasmith Authors.
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


#include "pragmasmith/llm_gateway.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pragmasmith/common.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace pragmasmith {
namespace {

json requestToJson(const ChatRequest& r) {
  return json{{"model", r.modelId},
              {"temperature", r.temperature},
              {"n", r.n},
              {"system", r.systemMessage},
              {"user", r.userPrompt}};
}

ChatRequest requestFromJson(const json& j) {
  ChatRequest r;
  r.modelId = j.at("model").get<std::string>();
  r.temperature = j.at("temperature").get<double>();
  r.n = j.at("n").get<int>();
  r.systemMessage = j.at("system").get<std::string>();
  r.userPrompt = j.at("user").get<std::string>();
  return r;
}

json responseToJson(const ChatResponse& r) {
  json j{{"completions", r.completions}, {"provider_meta", r.providerMeta}};
  if (r.usage) {
    j["usage"] = {{"prompt_tokens", r.usage->promptTokens},
                  {"completion_tokens", r.usage->completionTokens}};
  }
  return j;
}

ChatResponse responseFromJson(const json& j) {
  ChatResponse r;
  r.completions = j.at("completions").get<std::vector<std::string>>();
  r.providerMeta = j.value("provider_meta", "");
  if (j.contains("usage")) {
    r.usage = Usage{j["usage"].at("prompt_tokens").get<long>(),
                    j["usage"].at("completion_tokens").get<long>()};
  }
  return r;
}

ChatResponse parseCompletion(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderFailure, std::string("malformed completion response: ") + e.what());
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
    throw Error(ErrorCode::ProviderFailure, "completion response without choices");
  }
  std::vector<std::pair<int, std::string>> choices;
  int position = 0;
  for (const json& c : doc["choices"]) {
    int index = c.value("index", position);
    ++position;
    const json& content = c.at("message").at("content");
    choices.emplace_back(index, content.is_string() ? content.get<std::string>() : "");
  }
  std::stable_sort(choices.begin(), choices.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  ChatResponse r;
  for (auto& [index, text] : choices) r.completions.push_back(std::move(text));
  if (doc.contains("usage") && doc["usage"].is_object()) {
    r.usage = Usage{doc["usage"].value("prompt_tokens", 0L),
                    doc["usage"].value("completion_tokens", 0L)};
  }
  r.providerMeta = json{{"id", doc.value("id", "")}, {"model", doc.value("model", "")}}.dump();
  return r;
}

}  // namespace

void validateRequest(const ChatRequest& request) {
  if (request.n < 1) {
    throw Error(ErrorCode::PreconditionViolation, "n must be at least 1");
  }
  if (!(request.temperature >= 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "temperature must be non-negative");
  }
  if (request.systemMessage.size() > kSystemMessageCap) {
    throw Error(ErrorCode::PreconditionViolation,
                "system message has " + std::to_string(request.systemMessage.size()) +
                    " characters, cap is " + std::to_string(kSystemMessageCap));
  }
}

std::string chatDigest(const ChatRequest& request) {
  return sha256Hex(requestToJson(request).dump());
}

ChatResponse ChatProvider::complete(const ChatRequest& request) {
  validateRequest(request);
  return doComplete(request);
}

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  if (!config_.sleep) {
    config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

ChatResponse HttpProvider::doComplete(const ChatRequest& request) {
  const char* key = std::getenv(config_.apiKeyEnv.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::AuthError, "environment variable " + config_.apiKeyEnv + " is not set");
  }

  size_t schemeEnd = config_.baseUrl.find("://");
  size_t pathStart = config_.baseUrl.find('/', schemeEnd == std::string::npos ? 0 : schemeEnd + 3);
  std::string origin = config_.baseUrl.substr(0, pathStart);
  std::string path = pathStart == std::string::npos ? "" : config_.baseUrl.substr(pathStart);
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Client client(origin);
  if (!client.is_valid()) throw Error(ErrorCode::Config, "invalid endpoint " + config_.baseUrl);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  client.set_bearer_token_auth(key);

  json body{{"model", request.modelId},
            {"n", request.n},
            {"temperature", request.temperature},
            {"messages",
             {{{"role", "system"}, {"content", request.systemMessage}},
              {{"role", "user"}, {"content", request.userPrompt}}}}};
  std::string payload = body.dump();

  std::chrono::milliseconds backoff = config_.initialBackoff;
  for (int attempt = 1;; ++attempt) {
    httplib::Result res = client.Post(path, payload, "application/json");
    bool retryable = false;
    ErrorCode failure = ErrorCode::ProviderFailure;
    std::string what;
    if (!res) {
      retryable = true;
      what = "request failed: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      return parseCompletion(res->body);
    } else if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::AuthError, "endpoint refused credentials (HTTP " +
                                            std::to_string(res->status) + ")");
    } else if (res->status == 429) {
      retryable = true;
      failure = ErrorCode::RateLimited;
      what = "rate limited (HTTP 429)";
    } else {
      retryable = res->status >= 500;
      what = "HTTP " + std::to_string(res->status);
    }
    if (!retryable || attempt >= config_.maxAttempts) {
      throw Error(failure, what + " after " + std::to_string(attempt) + " attempt(s)");
    }
    config_.sleep(backoff);
    backoff *= 2;
  }
}

ScriptedProvider::ScriptedProvider(std::vector<std::vector<std::string>> script, Responder responder)
    : script_(script.begin(), script.end()), responder_(std::move(responder)) {}

ScriptedProvider::ScriptedProvider(Responder responder) : responder_(std::move(responder)) {}

size_t ScriptedProvider::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

ChatResponse ScriptedProvider::doComplete(const ChatRequest& request) {
  std::vector<std::string> replies;
  {
    std::lock_guard lock(mutex_);
    if (!script_.empty()) {
      replies = std::move(script_.front());
      script_.pop_front();
    } else if (!responder_) {
      throw Error(ErrorCode::ScriptExhausted, "scripted provider has no replies left");
    }
    ++calls_;
  }
  if (replies.empty() && responder_) replies = responder_(request);
  ChatResponse response;
  response.completions = std::move(replies);
  response.providerMeta = "scripted";
  return response;
}

ChatCassette ChatCassette::load(const fs::path& path) {
  ChatCassette cassette;
  json doc;
  try {
    doc = json::parse(readFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "malformed chat cassette " + path.string() + ": " + e.what());
  }
  for (const auto& [key, value] : doc.at("entries").items()) {
    cassette.entries_[key] =
        Entry{requestFromJson(value.at("request")), responseFromJson(value.at("response"))};
  }
  return cassette;
}

std::optional<ChatResponse> ChatCassette::find(const ChatRequest& request) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(chatDigest(request));
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

void ChatCassette::insert(const ChatRequest& request, const ChatResponse& response) {
  std::lock_guard lock(mutex_);
  entries_[chatDigest(request)] = Entry{request, response};
}

void ChatCassette::save(const fs::path& path) const {
  json entries = json::object();
  {
    std::lock_guard lock(mutex_);
    for (const auto& [key, e] : entries_) {
      entries[key] = {{"request", requestToJson(e.request)}, {"response", responseToJson(e.response)}};
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  writeFile(tmp, json{{"version", 1}, {"entries", entries}}.dump(2) + "\n");
  fs::rename(tmp, path);
}

size_t ChatCassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

ReplayProvider::ReplayProvider(std::shared_ptr<const ChatCassette> cassette)
    : cassette_(std::move(cassette)) {}

ChatResponse ReplayProvider::doComplete(const ChatRequest& request) {
  std::optional<ChatResponse> hit = cassette_->find(request);
  if (!hit) {
    throw Error(ErrorCode::CassetteMiss, "no recorded completion for request " + chatDigest(request));
  }
  return *hit;
}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner, fs::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {
  if (fs::exists(path_)) cassette_ = ChatCassette::load(path_);
}

ChatResponse RecordingProvider::doComplete(const ChatRequest& request) {
  ChatResponse response = inner_->complete(request);
  std::lock_guard lock(fileMutex_);
  cassette_.insert(request, response);
  cassette_.save(path_);
  return response;
}

}  // namespace pragmasmith
