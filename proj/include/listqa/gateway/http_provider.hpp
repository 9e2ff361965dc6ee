#pragma once

#include <string>

#include "listqa/gateway/provider.hpp"

namespace listqa::gateway {

// Chat-completion/embedding client over the common JSON wire shape:
// POST {base}/chat/completions {model, messages[], temperature, max_tokens}
// POST {base}/embeddings       {model, input[]}
// The API key is read from the environment variable named in the config.
// Transport failures, 429 and 5xx raise TransportError (retried by the
// Gateway); 401/403 raise AuthError; anything unparseable raises
// MalformedProviderResponse.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);

  CompletionResult complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "http:" + config_.base_url; }

 private:
  std::string post_json(const std::string& path, const std::string& body);

  ProviderConfig config_;
  std::string origin_;     // scheme://host[:port]
  std::string base_path_;  // path prefix from base_url, no trailing slash
};

}  // namespace listqa::gateway
