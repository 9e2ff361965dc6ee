#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>

#include "listqa/gateway/provider.hpp"

namespace listqa::gateway {

// Front door for every model call in the pipeline. Validates requests before
// any network activity, bounds in-flight concurrency to max_concurrent,
// retries transport-level failures with exponential backoff (total attempts
// <= max_retries + 1) and strips trailing whitespace from completion text.
// Embedding vectors are checked for equal dimension and L2-normalized here, so
// providers may return raw counts.
class Gateway {
 public:
  Gateway(ProviderPtr provider, ProviderConfig config);

  CompletionResult complete(const CompletionRequest& request);
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts);

  const ProviderConfig& config() const { return config_; }
  Provider& provider() { return *provider_; }

  // Sleeps between retries by default; tests inject a no-op.
  void set_sleep_hook(void (*hook)(int ms)) { sleep_hook_ = hook; }

 private:
  struct Slots {
    std::mutex mutex;
    std::condition_variable available;
    int in_flight = 0;
  };
  class ConcurrencyToken;

  template <typename Fn>
  auto with_retries(const std::string& what, Fn&& fn) -> decltype(fn());

  ProviderPtr provider_;
  ProviderConfig config_;
  std::unique_ptr<Slots> slots_;
  void (*sleep_hook_)(int ms);
};

}  // namespace listqa::gateway
