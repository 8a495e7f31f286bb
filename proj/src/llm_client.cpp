#include "easepatch/llm_client.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace easepatch {

std::string request_hash(std::string_view prompt) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : prompt) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

namespace {

Json usage_json(const Usage& usage) {
  Json out = Json::object();
  out["input_tokens"] = usage.input_tokens;
  out["output_tokens"] = usage.output_tokens;
  return out;
}

std::size_t size_field(const Json& object, const char* key) {
  auto it = object.find(key);
  return it != object.end() && it->is_number_unsigned() ? it->get<std::size_t>() : 0;
}

}  // namespace

Json fixture_record(std::string_view prompt, const Completion& completion) {
  Json out = Json::object();
  out["request_hash"] = request_hash(prompt);
  out["response"] = completion.text;
  out["usage"] = usage_json(completion.usage);
  return out;
}

ReplayClient::ReplayClient(std::istream& fixtures) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(fixtures, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json record = parse_json(line);
    if (!record.is_object() || !record.contains("request_hash") || !record.contains("response") ||
        !record["request_hash"].is_string() || !record["response"].is_string()) {
      throw Error(ErrorKind::InvalidField,
                  "fixture line " + std::to_string(number) + " needs request_hash and response");
    }
    Completion completion;
    completion.text = record["response"].get<std::string>();
    if (auto it = record.find("usage"); it != record.end() && it->is_object()) {
      completion.usage.input_tokens = size_field(*it, "input_tokens");
      completion.usage.output_tokens = size_field(*it, "output_tokens");
    }
    responses_[record["request_hash"].get<std::string>()] = std::move(completion);
  }
}

ReplayClient ReplayClient::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open fixture file '" + path + "'");
  return ReplayClient(in);
}

Completion ReplayClient::complete(const std::string& prompt, const GenerationParams&) {
  const auto hash = request_hash(prompt);
  auto it = responses_.find(hash);
  if (it == responses_.end()) {
    throw Error(ErrorKind::TransportError, "no recorded response for request " + hash);
  }
  return it->second;
}

Completion RecordingClient::complete(const std::string& prompt, const GenerationParams& params) {
  Completion completion = inner_.complete(prompt, params);
  std::lock_guard lock(mutex_);
  recorded_[request_hash(prompt)] = completion;
  return completion;
}

void RecordingClient::write_fixtures(std::ostream& out) const {
  std::lock_guard lock(mutex_);
  for (const auto& [hash, completion] : recorded_) {
    Json record = Json::object();
    record["request_hash"] = hash;
    record["response"] = completion.text;
    record["usage"] = usage_json(completion.usage);
    out << serialize_compact(record) << '\n';
  }
}

HttpClientConfig HttpClientConfig::from_environment() {
  HttpClientConfig config;
  if (const char* base = std::getenv("EASEPATCH_API_BASE")) config.base_url = base;
  if (const char* key = std::getenv("EASEPATCH_API_KEY")) config.api_key = key;
  if (const char* model = std::getenv("EASEPATCH_MODEL")) config.model = model;
  return config;
}

HttpClient::HttpClient(HttpClientConfig config) : config_(std::move(config)) {}

namespace {

// "https://host:port/prefix" -> ("https://host:port", "/prefix")
std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

}  // namespace

Completion HttpClient::complete(const std::string& prompt, const GenerationParams& params) {
  const auto [host, prefix] = split_base_url(config_.base_url);

  Json body = Json::object();
  body["model"] = config_.model;
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;
  Json message = Json::object();
  message["role"] = "user";
  message["content"] = prompt;
  body["messages"] = Json::array({message});
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error = "no attempt made";
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, config_.max_attempts); ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.retry_delay * (1 << (attempt - 1)));
    httplib::Client client(host);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    auto response = client.Post(prefix + "/chat/completions", headers, payload, "application/json");
    if (!response) {
      last_error = "request failed: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status == 429 || response->status >= 500) {
      last_error = "provider returned HTTP " + std::to_string(response->status);
      continue;
    }
    if (response->status != 200) {
      throw Error(ErrorKind::TransportError,
                  "provider returned HTTP " + std::to_string(response->status) + ": " + response->body);
    }
    try {
      const Json reply = Json::parse(response->body);
      Completion completion;
      completion.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (auto usage = reply.find("usage"); usage != reply.end() && usage->is_object()) {
        completion.usage.input_tokens = size_field(*usage, "prompt_tokens");
        completion.usage.output_tokens = size_field(*usage, "completion_tokens");
      }
      return completion;
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::TransportError, std::string("malformed provider response: ") + e.what());
    }
  }
  throw Error(ErrorKind::TransportError, last_error);
}

std::unique_ptr<LlmClient> make_client(std::string_view spec) {
  constexpr std::string_view replay = "replay:";
  if (spec.substr(0, replay.size()) == replay) {
    return std::make_unique<ReplayClient>(ReplayClient::from_file(std::string(spec.substr(replay.size()))));
  }
  if (spec == "live") return std::make_unique<HttpClient>(HttpClientConfig::from_environment());
  throw Error(ErrorKind::InvalidField, "unknown client '" + std::string(spec) +
                                           "' (expected replay:<file> or live)");
}

}  // namespace easepatch
