#include "listqa/gateway/session.hpp"

#include "listqa/util/text.hpp"

namespace listqa::gateway {

using nlohmann::json;

namespace {

json result_to_json(const CompletionResult& r) {
  return json{{"text", r.text},
              {"provider_id", r.provider_id},
              {"latency_ms", r.latency_ms},
              {"prompt_tokens", r.prompt_tokens},
              {"output_tokens", r.output_tokens}};
}

CompletionResult result_from_json(const json& j) {
  return CompletionResult{j.at("text").get<std::string>(), j.at("provider_id").get<std::string>(),
                          j.at("latency_ms").get<std::int64_t>(), j.at("prompt_tokens").get<int>(),
                          j.at("output_tokens").get<int>()};
}

std::unordered_map<std::string, json> load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorruptSession("cannot open session file: " + path.string());
  std::unordered_map<std::string, json> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    json row;
    try {
      row = json::parse(t);
    } catch (const json::exception& e) {
      throw CorruptSession(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!row.contains("digest") || !row.contains("response"))
      throw CorruptSession(path.string() + ":" + std::to_string(line_no) +
                           ": missing digest or response");
    out[row["digest"].get<std::string>()] = row["response"];
  }
  return out;
}

}  // namespace

RecordingProvider::RecordingProvider(ProviderPtr inner, const std::filesystem::path& session_path)
    : inner_(std::move(inner)) {
  if (!inner_) throw std::invalid_argument("record mode requires an inner provider");
  if (std::filesystem::exists(session_path)) cache_ = load_session(session_path);
  out_.open(session_path, std::ios::app);
  if (!out_) throw CorruptSession("cannot open session file for append: " + session_path.string());
}

void RecordingProvider::append(const std::string& digest, const json& request,
                               const json& response) {
  cache_[digest] = response;
  out_ << json{{"digest", digest}, {"request", request}, {"response", response}}.dump() << '\n';
  out_.flush();
}

CompletionResult RecordingProvider::complete(const CompletionRequest& request) {
  std::string digest = request_digest(request);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(digest);
    if (it != cache_.end()) return result_from_json(it->second);
  }
  CompletionResult result = inner_->complete(request);
  std::lock_guard lock(mutex_);
  if (cache_.find(digest) == cache_.end())
    append(digest, request_to_json(request), result_to_json(result));
  return result;
}

std::vector<std::vector<double>> RecordingProvider::embed(const std::vector<std::string>& texts) {
  std::string digest = embed_digest(texts);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(digest);
    if (it != cache_.end()) return it->second.get<std::vector<std::vector<double>>>();
  }
  auto vectors = inner_->embed(texts);
  std::lock_guard lock(mutex_);
  if (cache_.find(digest) == cache_.end())
    append(digest, json{{"kind", "embedding"}, {"texts", texts}}, json(vectors));
  return vectors;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& session_path) : path_(session_path) {
  responses_ = load_session(session_path);
}

CompletionResult ReplayProvider::complete(const CompletionRequest& request) {
  auto it = responses_.find(request_digest(request));
  if (it == responses_.end())
    throw ReplayMiss("no recorded response for stage '" + request.request_tag + "' in " +
                     path_.string());
  return result_from_json(it->second);
}

std::vector<std::vector<double>> ReplayProvider::embed(const std::vector<std::string>& texts) {
  auto it = responses_.find(embed_digest(texts));
  if (it == responses_.end())
    throw ReplayMiss("no recorded embedding for a batch of " + std::to_string(texts.size()) +
                     " texts in " + path_.string());
  return it->second.get<std::vector<std::vector<double>>>();
}

ProviderPtr open_session(const std::filesystem::path& session_path, bool record,
                         ProviderPtr inner) {
  if (record) return std::make_shared<RecordingProvider>(std::move(inner), session_path);
  return std::make_shared<ReplayProvider>(session_path);
}

}  // namespace listqa::gateway
