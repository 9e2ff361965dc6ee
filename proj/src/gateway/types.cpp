#include "listqa/gateway/types.hpp"

#include "listqa/util/text.hpp"

namespace listqa::gateway {

using nlohmann::json;

json request_to_json(const CompletionRequest& request) {
  return json{{"kind", "completion"},
              {"model", request.model},
              {"system", request.system_text ? json(*request.system_text) : json(nullptr)},
              {"user", request.user_text},
              {"max_tokens", request.max_output_tokens},
              {"temperature", request.temperature},
              {"stop", request.stop_sequences},
              {"tag", request.request_tag}};
}

CompletionRequest request_from_json(const json& j) {
  CompletionRequest r;
  r.model = j.at("model").get<std::string>();
  if (!j.at("system").is_null()) r.system_text = j.at("system").get<std::string>();
  r.user_text = j.at("user").get<std::string>();
  r.max_output_tokens = j.at("max_tokens").get<int>();
  r.temperature = j.at("temperature").get<double>();
  r.stop_sequences = j.at("stop").get<std::vector<std::string>>();
  r.request_tag = j.at("tag").get<std::string>();
  return r;
}

std::string request_digest(const CompletionRequest& request) {
  // nlohmann objects iterate in sorted key order, so dump() is canonical.
  return to_hex(fnv1a64(request_to_json(request).dump()));
}

std::string embed_digest(const std::vector<std::string>& texts) {
  json j{{"kind", "embedding"}, {"texts", texts}};
  return to_hex(fnv1a64(j.dump()));
}

}  // namespace listqa::gateway
