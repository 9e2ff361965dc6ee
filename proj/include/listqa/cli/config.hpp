#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "listqa/gateway/types.hpp"
#include "listqa/synthesis/pipeline.hpp"

namespace listqa::cli {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Everything one run needs, loaded from an INI-style config file:
//
//   [corpus]
//   manifest = corpus/manifest.txt
//   [provider]
//   kind = mock | http
//   ...
//
// Command-line flags override individual fields after loading.
struct RunConfig {
  std::filesystem::path config_path;
  std::filesystem::path manifest;
  std::filesystem::path prompt_dir = "prompts";
  std::filesystem::path fewshot_bank;  // defaults to prompt_dir/fewshot_bank.json
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> replay_session;
  bool record_session = false;  // record into replay_session instead of replaying

  // provider
  std::string provider_kind = "mock";  // "mock" | "http"
  std::filesystem::path mock_script;
  gateway::ProviderConfig provider;

  // pipeline
  synthesis::PipelineConfig pipeline;

  // retrieval
  std::string retrieval_backend = "lexical";  // "lexical" | "embedding"
  int top_k = 3;
  std::optional<double> score_floor;
  bool index_all_passages = true;  // false: index only list-bearing passages

  // answering
  std::string answer_mode = "isl";  // "isl" | "direct"
  int shots = 0;
  int answer_max_tokens = 768;

  // Digest of the raw config file content; stamped into output headers.
  std::string config_digest;
};

RunConfig load_config(const std::filesystem::path& path);

// Raw section/key access for tests and tooling.
std::map<std::string, std::map<std::string, std::string>> parse_ini(const std::string& content);

}  // namespace listqa::cli
