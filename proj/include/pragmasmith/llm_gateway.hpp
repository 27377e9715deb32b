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


// Chat-completion access with n completions per request: an OpenAI-compatible
// HTTP client plus scripted and record/replay providers.

#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace pragmasmith {

inline constexpr size_t kSystemMessageCap = 512;

struct ChatRequest {
  std::string systemMessage;
  std::string userPrompt;
  int n = 1;
  double temperature = 1.0;
  std::string modelId;
  bool operator==(const ChatRequest&) const = default;
};

struct Usage {
  long promptTokens = 0;
  long completionTokens = 0;
  bool operator==(const Usage&) const = default;
};

struct ChatResponse {
  std::vector<std::string> completions;
  std::optional<Usage> usage;
  std::string providerMeta;
  bool operator==(const ChatResponse&) const = default;
};

/// Throws Error(PreconditionViolation) unless n >= 1, temperature >= 0 and
/// the system message fits the cap.
void validateRequest(const ChatRequest& request);

/// Cassette key over model, temperature, n and both messages.
std::string chatDigest(const ChatRequest& request);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  /// Validates the request before the provider sees it.
  ChatResponse complete(const ChatRequest& request);

 protected:
  virtual ChatResponse doComplete(const ChatRequest& request) = 0;
};

struct HttpProviderConfig {
  /// Base URL up to and excluding `/chat/completions`.
  std::string baseUrl = "https://api.openai.com/v1";
  /// Environment variable holding the bearer token.
  std::string apiKeyEnv = "OPENAI_API_KEY";
  int maxAttempts = 5;
  std::chrono::milliseconds initialBackoff{2000};
  std::chrono::seconds timeout{600};
  /// Replaceable for tests.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// OpenAI-compatible `POST {baseUrl}/chat/completions`. 401/403 raise
/// AuthError; 429 and 5xx are retried with exponential backoff, then raise
/// RateLimited or ProviderFailure.
class HttpProvider : public ChatProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

 protected:
  ChatResponse doComplete(const ChatRequest& request) override;

 private:
  HttpProviderConfig config_;
};

/// Replies from a fixed script, one reply list per call, then from an
/// optional responder; ScriptExhausted when both run out.
class ScriptedProvider : public ChatProvider {
 public:
  using Responder = std::function<std::vector<std::string>(const ChatRequest&)>;

  explicit ScriptedProvider(std::vector<std::vector<std::string>> script,
                            Responder responder = {});
  explicit ScriptedProvider(Responder responder);

  size_t calls() const;

 protected:
  ChatResponse doComplete(const ChatRequest& request) override;

 private:
  mutable std::mutex mutex_;
  std::deque<std::vector<std::string>> script_;
  Responder responder_;
  size_t calls_ = 0;
};

/// Digest-keyed store of chat exchanges. Requests are kept for inspection;
/// credentials never reach it.
class ChatCassette {
 public:
  ChatCassette() = default;
  ChatCassette(ChatCassette&& other) noexcept : entries_(std::move(other.entries_)) {}
  ChatCassette& operator=(ChatCassette&& other) noexcept {
    entries_ = std::move(other.entries_);
    return *this;
  }
  static ChatCassette load(const std::filesystem::path& path);

  std::optional<ChatResponse> find(const ChatRequest& request) const;
  void insert(const ChatRequest& request, const ChatResponse& response);
  void save(const std::filesystem::path& path) const;
  size_t size() const;

 private:
  struct Entry {
    ChatRequest request;
    ChatResponse response;
  };
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
};

/// Answers from a cassette only; a missing key is Error(CassetteMiss).
class ReplayProvider : public ChatProvider {
 public:
  explicit ReplayProvider(std::shared_ptr<const ChatCassette> cassette);

 protected:
  ChatResponse doComplete(const ChatRequest& request) override;

 private:
  std::shared_ptr<const ChatCassette> cassette_;
};

/// Forwards to another provider and appends each exchange to a cassette file.
class RecordingProvider : public ChatProvider {
 public:
  RecordingProvider(std::shared_ptr<ChatProvider> inner, std::filesystem::path path);

 protected:
  ChatResponse doComplete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatProvider> inner_;
  std::filesystem::path path_;
  ChatCassette cassette_;
  std::mutex fileMutex_;
};

}  // namespace pragmasmith
