#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace listqa::gateway {

struct CompletionRequest {
  std::string model;
  std::optional<std::string> system_text;
  std::string user_text;
  int max_output_tokens = 512;
  double temperature = 0.0;
  std::vector<std::string> stop_sequences;
  std::string request_tag;  // pipeline stage label, used for logging and replay diagnostics
};

struct CompletionResult {
  std::string text;
  std::string provider_id;
  std::int64_t latency_ms = 0;
  int prompt_tokens = 0;  // 0 when the provider does not report usage
  int output_tokens = 0;
};

struct ProviderConfig {
  std::string base_url;
  std::string api_key_env_var;
  std::string model;        // default completion model
  std::string embed_model;  // default embedding model
  int max_concurrent = 4;
  int max_retries = 3;
  int backoff_base_ms = 250;
  int timeout_s = 60;
};

struct ProviderExhausted : std::runtime_error {
  explicit ProviderExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct AuthError : std::runtime_error {
  explicit AuthError(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedProviderResponse : std::runtime_error {
  explicit MalformedProviderResponse(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ReplayMiss : std::runtime_error {
  explicit ReplayMiss(const std::string& what) : std::runtime_error(what) {}
};

struct CorruptSession : std::runtime_error {
  explicit CorruptSession(const std::string& what) : std::runtime_error(what) {}
};

// Retryable transport-level failure (connection error, 429, 5xx).
struct TransportError : std::runtime_error {
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical JSON form of a request; the digest keys record/replay sessions.
nlohmann::json request_to_json(const CompletionRequest& request);
CompletionRequest request_from_json(const nlohmann::json& j);
std::string request_digest(const CompletionRequest& request);
std::string embed_digest(const std::vector<std::string>& texts);

}  // namespace listqa::gateway
