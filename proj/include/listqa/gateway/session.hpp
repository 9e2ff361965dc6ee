#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <unordered_map>

#include "listqa/gateway/provider.hpp"

namespace listqa::gateway {

// Persists every (request, response) pair of an inner provider to a session
// file, one JSON object per line keyed by the request digest. A digest already
// in the session is served from it without touching the inner provider.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(ProviderPtr inner, const std::filesystem::path& session_path);

  CompletionResult complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return inner_->id(); }

 private:
  void append(const std::string& digest, const nlohmann::json& request,
              const nlohmann::json& response);

  ProviderPtr inner_;
  std::ofstream out_;
  std::unordered_map<std::string, nlohmann::json> cache_;
  std::mutex mutex_;
};

// Serves a previously recorded session; never opens a network connection.
// An unseen digest raises ReplayMiss naming the request's stage tag.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(const std::filesystem::path& session_path);

  CompletionResult complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "replay"; }

 private:
  std::unordered_map<std::string, nlohmann::json> responses_;
  std::filesystem::path path_;
};

// Wraps `inner` in a RecordingProvider (record mode, inner required) or opens
// the session read-only (replay mode).
ProviderPtr open_session(const std::filesystem::path& session_path, bool record,
                         ProviderPtr inner = nullptr);

}  // namespace listqa::gateway
