#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "listqa/cli/config.hpp"
#include "listqa/evalkit/report.hpp"
#include "listqa/gateway/gateway.hpp"
#include "listqa/synthesis/pipeline.hpp"

namespace listqa::cli {

struct MissingArtifact : std::runtime_error {
  explicit MissingArtifact(const std::string& what) : std::runtime_error(what) {}
};

// Provider wiring per config: mock or http, optionally wrapped in a session
// recorder or served purely from a replay session.
struct GatewayHandle {
  gateway::ProviderPtr provider;
  std::unique_ptr<gateway::Gateway> gw;
};
GatewayHandle make_gateway(const RunConfig& cfg);

// Standard artifact locations under the output directory.
std::filesystem::path corpus_path(const RunConfig& cfg);
std::filesystem::path dataset_path(const RunConfig& cfg);
std::filesystem::path rejected_path(const RunConfig& cfg);
std::filesystem::path pipeline_report_path(const RunConfig& cfg);
std::filesystem::path index_path(const RunConfig& cfg);
std::filesystem::path answers_path(const RunConfig& cfg);
std::filesystem::path verdicts_path(const RunConfig& cfg);
std::filesystem::path eval_report_path(const RunConfig& cfg);

// Header object stamped as the first line of every output file.
nlohmann::json file_header(const RunConfig& cfg);

struct IngestResult {
  std::filesystem::path corpus_file;
  int documents = 0;
  int passages = 0;
  int failures = 0;
};
IngestResult cmd_ingest(const RunConfig& cfg);

struct SynthesizeResult {
  std::filesystem::path dataset_file;
  std::filesystem::path rejected_file;
  std::filesystem::path report_file;
  synthesis::PipelineReport report;
};
SynthesizeResult cmd_synthesize(const RunConfig& cfg);

struct IndexBuildResult {
  std::filesystem::path index_file;
  std::size_t passages = 0;
};
IndexBuildResult cmd_index(const RunConfig& cfg);

struct AnswerRequest {
  std::string question;
  std::string mode = "isl";  // "isl" | "direct"
  int shots = 0;
};

// Answers one question against the persisted index. The returned row carries
// the response, retrieval outcome and (isl mode) the parsed block plus
// consistency findings.
nlohmann::json cmd_answer(const RunConfig& cfg, const AnswerRequest& request);

struct AnswerBatchResult {
  std::filesystem::path answers_file;
  int answered = 0;
  int failures = 0;
};
// Answers every record of the given split in the dataset file.
AnswerBatchResult cmd_answer_batch(const RunConfig& cfg, const std::filesystem::path& dataset_file,
                                   const std::string& split);

struct EvaluateResult {
  std::filesystem::path verdicts_file;
  std::filesystem::path report_file;
  evalkit::Report report;
  int evaluated = 0;
  int failures = 0;
};
// Scores an answers file against the dataset references: ROUGE-L plus the
// model judge, aggregated with per-list-type and seen/unseen breakdowns.
EvaluateResult cmd_evaluate(const RunConfig& cfg, const std::filesystem::path& dataset_file,
                            const std::filesystem::path& answers_file);

}  // namespace listqa::cli
