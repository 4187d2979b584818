#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace storygame {

struct GenerationRequest {
  std::string prompt;
  double temperature = 0.0;
  std::size_t max_output_tokens = 1024;
};

struct GenerationResponse {
  std::string text;
  std::map<std::string, std::string> metadata;
};

/// Text-generation service. Implementations must be safe to share across
/// threads; `generate` throws Error(ClientError) on failure.
class GenerationClient {
 public:
  virtual ~GenerationClient() = default;
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
  /// Requests that left the process.
  virtual std::size_t network_calls() const = 0;
};

/// Replays recorded request/response pairs, matched on the exact prompt.
///
/// A recording is a JSON file `{"request": {"prompt": ...}, "response":
/// {"text": ..., "metadata": {...}}}`; every `*.json` in the directory is
/// loaded.
class FixtureClient : public GenerationClient {
 public:
  explicit FixtureClient(const std::filesystem::path& directory);
  FixtureClient(std::map<std::string, GenerationResponse> recordings) : recordings_(std::move(recordings)) {}

  GenerationResponse generate(const GenerationRequest& request) override;
  std::size_t network_calls() const override { return 0; }

  std::vector<std::string> call_log() const;
  std::size_t size() const { return recordings_.size(); }

 private:
  std::map<std::string, GenerationResponse> recordings_;
  mutable std::mutex mutex_;
  std::vector<std::string> calls_;
};

inline constexpr const char* kApiKeyEnv = "STORYGAME_API_KEY";

struct HttpClientConfig {
  /// Base URL of an OpenAI-compatible server, e.g. "http://localhost:8080".
  std::string endpoint = "http://localhost:8080";
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  std::chrono::seconds timeout{60};
  int retries = 2;
  /// Bearer credential; read from STORYGAME_API_KEY when empty.
  std::string api_key;
};

/// Synchronous chat-completions client. One request per `generate`, retried
/// on transport errors and 5xx responses.
class HttpClient : public GenerationClient {
 public:
  explicit HttpClient(HttpClientConfig config);

  GenerationResponse generate(const GenerationRequest& request) override;
  std::size_t network_calls() const override;

 private:
  HttpClientConfig config_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

}  // namespace storygame
