#include "listqa/gateway/mock_provider.hpp"

#include <fstream>

#include "listqa/util/text.hpp"

namespace listqa::gateway {

using nlohmann::json;

MockProvider::MockProvider(std::vector<MockRule> rules, std::string default_response,
                           int embed_dimension)
    : rules_(std::move(rules)),
      default_response_(std::move(default_response)),
      embed_dimension_(embed_dimension) {}

std::shared_ptr<MockProvider> MockProvider::from_script_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mock script: " + path.string());
  json j = json::parse(in);
  std::vector<MockRule> rules;
  for (const auto& r : j.value("rules", json::array()))
    rules.push_back(MockRule{r.value("tag", ""), r.value("contains", ""),
                             r.at("response").get<std::string>()});
  return std::make_shared<MockProvider>(std::move(rules), j.value("default_response", ""),
                                        j.value("embed_dimension", 32));
}

CompletionResult MockProvider::complete(const CompletionRequest& request) {
  completion_calls_.fetch_add(1);
  for (const auto& rule : rules_) {
    if (!rule.tag.empty() && rule.tag != request.request_tag) continue;
    if (!rule.contains.empty() && request.user_text.find(rule.contains) == std::string::npos)
      continue;
    return CompletionResult{rule.response, id(), 0, 0, 0};
  }
  if (!default_response_.empty()) return CompletionResult{default_response_, id(), 0, 0, 0};
  throw MalformedProviderResponse("mock: no rule matches tag '" + request.request_tag + "'");
}

std::vector<std::vector<double>> MockProvider::embed(const std::vector<std::string>& texts) {
  embed_calls_.fetch_add(1);
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(static_cast<std::size_t>(embed_dimension_), 0.0);
    for (const auto& token : tokenize_alnum(text))
      v[fnv1a64(token) % static_cast<std::uint64_t>(embed_dimension_)] += 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace listqa::gateway
