#include "listqa/gateway/http_provider.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace listqa::gateway {

using nlohmann::json;

namespace {

// Splits "https://host:port/v1" into origin and path prefix.
void split_base_url(const std::string& base_url, std::string* origin, std::string* base_path) {
  std::size_t scheme = base_url.find("://");
  std::size_t path_start =
      scheme == std::string::npos ? base_url.find('/') : base_url.find('/', scheme + 3);
  if (path_start == std::string::npos) {
    *origin = base_url;
    *base_path = "";
    return;
  }
  *origin = base_url.substr(0, path_start);
  *base_path = base_url.substr(path_start);
  while (!base_path->empty() && base_path->back() == '/') base_path->pop_back();
}

}  // namespace

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
  split_base_url(config_.base_url, &origin_, &base_path_);
}

std::string HttpProvider::post_json(const std::string& path, const std::string& body) {
  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout_s);
  client.set_read_timeout(config_.timeout_s);

  httplib::Headers headers;
  if (!config_.api_key_env_var.empty()) {
    const char* key = std::getenv(config_.api_key_env_var.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthError("environment variable not set: " + config_.api_key_env_var);
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto res = client.Post(base_path_ + path, headers, body, "application/json");
  if (!res) throw TransportError("transport failure against " + origin_ + path);
  if (res->status == 401 || res->status == 403)
    throw AuthError("provider rejected credentials (" + std::to_string(res->status) + ")");
  if (res->status == 429 || res->status >= 500)
    throw TransportError("provider returned status " + std::to_string(res->status));
  if (res->status != 200)
    throw MalformedProviderResponse("provider returned status " + std::to_string(res->status) +
                                    ": " + res->body.substr(0, 200));
  return res->body;
}

CompletionResult HttpProvider::complete(const CompletionRequest& request) {
  json messages = json::array();
  if (request.system_text)
    messages.push_back({{"role", "system"}, {"content", *request.system_text}});
  messages.push_back({{"role", "user"}, {"content", request.user_text}});
  json body{{"model", request.model.empty() ? config_.model : request.model},
            {"messages", std::move(messages)},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens}};
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;

  auto start = std::chrono::steady_clock::now();
  std::string raw = post_json("/chat/completions", body.dump());
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  try {
    json j = json::parse(raw);
    CompletionResult result;
    result.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    result.provider_id = id();
    result.latency_ms = elapsed;
    if (j.contains("usage")) {
      result.prompt_tokens = j["usage"].value("prompt_tokens", 0);
      result.output_tokens = j["usage"].value("completion_tokens", 0);
    }
    return result;
  } catch (const json::exception& e) {
    throw MalformedProviderResponse(std::string("bad completion payload: ") + e.what());
  }
}

std::vector<std::vector<double>> HttpProvider::embed(const std::vector<std::string>& texts) {
  json body{{"model", config_.embed_model}, {"input", texts}};
  std::string raw = post_json("/embeddings", body.dump());
  try {
    json j = json::parse(raw);
    std::vector<std::vector<double>> out(texts.size());
    for (const auto& item : j.at("data")) {
      auto index = item.at("index").get<std::size_t>();
      if (index >= out.size())
        throw MalformedProviderResponse("embedding index out of range");
      out[index] = item.at("embedding").get<std::vector<double>>();
    }
    for (const auto& v : out)
      if (v.empty()) throw MalformedProviderResponse("embedding batch incomplete");
    return out;
  } catch (const json::exception& e) {
    throw MalformedProviderResponse(std::string("bad embedding payload: ") + e.what());
  }
}

}  // namespace listqa::gateway
