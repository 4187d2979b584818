#include "storygame/generation_client.hpp"

#include "storygame/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace storygame {

namespace {

GenerationResponse read_recording(const std::filesystem::path& file, std::string& prompt) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    prompt = doc.at("request").at("prompt").get<std::string>();
    GenerationResponse response;
    response.text = doc.at("response").at("text").get<std::string>();
    if (doc["response"].contains("metadata"))
      for (const auto& [k, v] : doc["response"]["metadata"].items())
        response.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return response;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ClientError, "bad recording " + file.filename().string() + ": " + e.what());
  }
}

}  // namespace

FixtureClient::FixtureClient(const std::filesystem::path& directory) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec))
    throw Error(ErrorCode::IoError, "not a directory: " + directory.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string prompt;
    GenerationResponse response = read_recording(file, prompt);
    recordings_.emplace(std::move(prompt), std::move(response));
  }
}

GenerationResponse FixtureClient::generate(const GenerationRequest& request) {
  {
    std::lock_guard lock(mutex_);
    calls_.push_back(request.prompt);
  }
  auto it = recordings_.find(request.prompt);
  if (it == recordings_.end()) {
    std::string head = request.prompt.substr(0, 60);
    throw Error(ErrorCode::ClientError, "no recording for prompt \"" + head + "...\"");
  }
  return it->second;
}

std::vector<std::string> FixtureClient::call_log() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

// ---------------------------------------------------------------------------

HttpClient::HttpClient(HttpClientConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty())
    if (const char* key = std::getenv(kApiKeyEnv)) config_.api_key = key;
}

std::size_t HttpClient::network_calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

GenerationResponse HttpClient::generate(const GenerationRequest& request) {
  nlohmann::json body = {
      {"model", config_.model},
      {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    {
      std::lock_guard lock(mutex_);
      ++calls_;
    }
    auto result = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_error = "server returned " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200)
      throw Error(ErrorCode::ClientError, "server returned " + std::to_string(result->status) + ": " + result->body);
    try {
      const auto doc = nlohmann::json::parse(result->body);
      GenerationResponse response;
      response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
      if (response.text.empty()) throw Error(ErrorCode::ClientError, "empty completion");
      if (doc.contains("model") && doc["model"].is_string()) response.metadata["model"] = doc["model"];
      if (doc.contains("id") && doc["id"].is_string()) response.metadata["id"] = doc["id"];
      response.metadata["attempts"] = std::to_string(attempt + 1);
      return response;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ClientError, std::string("malformed completion: ") + e.what());
    }
  }
  throw Error(ErrorCode::ClientError, last_error + " after " + std::to_string(config_.retries + 1) + " attempts");
}

}  // namespace storygame
