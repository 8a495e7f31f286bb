#pragma once

// Text-completion clients. Everything above this layer talks to LlmClient,
// so runs can be replayed offline from recorded fixtures.

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "easepatch/json_model.hpp"

namespace easepatch {

struct Usage {
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;
};

struct GenerationParams {
  double temperature = 0.0;
  std::size_t max_tokens = 4096;
};

struct Completion {
  std::string text;
  Usage usage;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;

  /// Throws Error(TransportError) when no completion can be obtained.
  virtual Completion complete(const std::string& prompt, const GenerationParams& params) = 0;
};

/// FNV-1a 64 of the prompt bytes, 16 lowercase hex digits. Fixtures are keyed
/// by this value.
std::string request_hash(std::string_view prompt);

/// Serves recorded completions. Lookup is read-only after construction, so
/// one instance may be shared across threads.
class ReplayClient : public LlmClient {
 public:
  /// Line-delimited {"request_hash", "response", "usage": {"input_tokens",
  /// "output_tokens"}}. Later records override earlier ones.
  explicit ReplayClient(std::istream& fixtures);
  static ReplayClient from_file(const std::string& path);

  Completion complete(const std::string& prompt, const GenerationParams& params) override;

  std::size_t size() const noexcept { return responses_.size(); }

 private:
  std::map<std::string, Completion> responses_;
};

/// Forwards to another client and keeps every exchange so it can be written
/// out as a replay fixture file.
class RecordingClient : public LlmClient {
 public:
  explicit RecordingClient(LlmClient& inner) : inner_(inner) {}

  Completion complete(const std::string& prompt, const GenerationParams& params) override;

  /// Records sorted by hash, so output does not depend on call order.
  void write_fixtures(std::ostream& out) const;

 private:
  LlmClient& inner_;
  mutable std::mutex mutex_;
  std::map<std::string, Completion> recorded_;
};

Json fixture_record(std::string_view prompt, const Completion& completion);

struct HttpClientConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o-mini";
  std::chrono::seconds timeout{120};
  std::size_t max_attempts = 3;
  std::chrono::milliseconds retry_delay{200};  // doubled after every retry

  /// EASEPATCH_API_BASE, EASEPATCH_API_KEY, EASEPATCH_MODEL.
  static HttpClientConfig from_environment();
};

/// OpenAI-compatible chat-completions endpoint: POST {base_url}/chat/completions.
/// Transport failures, 429 and 5xx responses are retried up to max_attempts.
class HttpClient : public LlmClient {
 public:
  explicit HttpClient(HttpClientConfig config);

  Completion complete(const std::string& prompt, const GenerationParams& params) override;

 private:
  HttpClientConfig config_;
};

/// "replay:<file>" or "live".
std::unique_ptr<LlmClient> make_client(std::string_view spec);

}  // namespace easepatch
