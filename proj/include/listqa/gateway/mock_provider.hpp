#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "listqa/gateway/provider.hpp"

namespace listqa::gateway {

// One scripted completion rule. A request matches when its tag equals `tag`
// (empty tag matches any) and its user text contains `contains` (empty matches
// any). First matching rule wins; rules are not consumed, so identical
// requests always produce identical results.
struct MockRule {
  std::string tag;
  std::string contains;
  std::string response;
};

// Deterministic offline provider for tests and replayable pipelines.
// Embeddings are token-hash bag-of-words vectors of fixed dimension.
class MockProvider : public Provider {
 public:
  explicit MockProvider(std::vector<MockRule> rules, std::string default_response = "",
                        int embed_dimension = 32);

  // Loads {"rules":[{tag,contains,response}...], "default_response", "embed_dimension"}.
  static std::shared_ptr<MockProvider> from_script_file(const std::filesystem::path& path);

  CompletionResult complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "mock"; }

  int completion_calls() const { return completion_calls_.load(); }
  int embed_calls() const { return embed_calls_.load(); }

 private:
  std::vector<MockRule> rules_;
  std::string default_response_;
  int embed_dimension_;
  std::atomic<int> completion_calls_{0};
  std::atomic<int> embed_calls_{0};
};

}  // namespace listqa::gateway
