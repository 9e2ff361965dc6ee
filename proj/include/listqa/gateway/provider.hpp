#pragma once

#include <memory>
#include <string>
#include <vector>

#include "listqa/gateway/types.hpp"

namespace listqa::gateway {

// A completion/embedding backend. Implementations: HttpProvider (network),
// MockProvider (scripted), RecordingProvider / ReplayProvider (sessions).
class Provider {
 public:
  virtual ~Provider() = default;
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string id() const = 0;
};

using ProviderPtr = std::shared_ptr<Provider>;

}  // namespace listqa::gateway
