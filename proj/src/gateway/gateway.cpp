#include "listqa/gateway/gateway.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "listqa/util/text.hpp"

namespace listqa::gateway {

namespace {

void default_sleep(int ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); }

}  // namespace

Gateway::Gateway(ProviderPtr provider, ProviderConfig config)
    : provider_(std::move(provider)),
      config_(std::move(config)),
      slots_(std::make_unique<Slots>()),
      sleep_hook_(&default_sleep) {
  if (!provider_) throw std::invalid_argument("gateway requires a provider");
  if (config_.max_concurrent < 1) throw std::invalid_argument("max_concurrent must be >= 1");
}

class Gateway::ConcurrencyToken {
 public:
  explicit ConcurrencyToken(Gateway& g) : slots_(*g.slots_) {
    std::unique_lock lock(slots_.mutex);
    slots_.available.wait(lock,
                          [&] { return slots_.in_flight < g.config_.max_concurrent; });
    ++slots_.in_flight;
  }
  ~ConcurrencyToken() {
    {
      std::lock_guard lock(slots_.mutex);
      --slots_.in_flight;
    }
    slots_.available.notify_one();
  }

 private:
  Slots& slots_;
};

template <typename Fn>
auto Gateway::with_retries(const std::string& what, Fn&& fn) -> decltype(fn()) {
  const int max_attempts = config_.max_retries + 1;
  std::string last_error;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempt > 0) {
      int delay = config_.backoff_base_ms * (1 << (attempt - 1));
      sleep_hook_(delay);
    }
    try {
      ConcurrencyToken token(*this);
      return fn();
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw ProviderExhausted(what + ": retries exhausted after " + std::to_string(max_attempts) +
                          " attempts; last error: " + last_error);
}

CompletionResult Gateway::complete(const CompletionRequest& request) {
  if (request.user_text.empty())
    throw std::invalid_argument("completion request with empty user text");
  if (request.max_output_tokens < 1)
    throw std::invalid_argument("max_output_tokens must be >= 1");
  if (request.temperature < 0.0 || request.temperature > 2.0)
    throw std::invalid_argument("temperature must be within [0, 2]");

  CompletionResult result =
      with_retries("complete[" + request.request_tag + "]",
                   [&] { return provider_->complete(request); });
  result.text = rtrim(result.text);
  return result;
}

std::vector<std::vector<double>> Gateway::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw std::invalid_argument("embed requires at least one text");
  for (const auto& t : texts)
    if (trim_view(t).empty()) throw std::invalid_argument("embed input text is empty");

  auto vectors = with_retries("embed", [&] { return provider_->embed(texts); });
  if (vectors.size() != texts.size())
    throw DimensionMismatch("provider returned " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts");
  std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
  for (auto& v : vectors) {
    if (v.size() != dim)
      throw DimensionMismatch("embedding vectors differ in dimension");
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : v) x /= norm;
  }
  return vectors;
}

}  // namespace listqa::gateway
