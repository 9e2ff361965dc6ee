#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "listqa/corpus/types.hpp"
#include "listqa/gateway/gateway.hpp"
#include "listqa/prompts.hpp"
#include "listqa/synthesis/types.hpp"

namespace listqa::synthesis {

struct ClassifierParseError : std::runtime_error {
  explicit ClassifierParseError(const std::string& what) : std::runtime_error(what) {}
};

struct JudgeUnparseable : std::runtime_error {
  explicit JudgeUnparseable(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyGeneration : std::runtime_error {
  explicit EmptyGeneration(const std::string& what) : std::runtime_error(what) {}
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  bool filtering = true;
  double train_ratio = 0.55;
  double dev_ratio = 0.075;
  double test_ratio = 0.375;
  std::vector<std::string> unseen_sources;  // source names tagged "unseen"
  std::string model;
  int classify_max_tokens = 16;
  int generate_max_tokens = 512;
  int judge_max_tokens = 1024;
  double generation_temperature = 0.7;  // classification and judging run at 0
};

struct RecordFailure {
  std::string record_id;
  std::string stage;
  std::string message;
};

struct PipelineReport {
  int passages_with_lists = 0;
  int blocks_total = 0;
  int records_generated = 0;
  int kept = 0;
  int dropped_by_verdict = 0;
  int dropped_by_error = 0;
  std::map<listlogic::ListType, int> generated_per_type;
  std::map<listlogic::ListType, int> kept_per_type;
  std::map<listlogic::ShortAnswer, int> deduced_distribution;
  std::map<std::string, int> split_counts;
  double question_mtld = 0.0;
  double response_mtld = 0.0;
  std::vector<RecordFailure> failures;

  double retention() const {
    return records_generated > 0 ? static_cast<double>(kept) / records_generated : 0.0;
  }
};

nlohmann::json report_to_json(const PipelineReport& report);

struct PipelineResult {
  std::vector<DatasetRecord> records;  // kept and dropped, corpus order
  PipelineReport report;
};

// Four-stage dataset synthesis over list-bearing passages: classify the list,
// sample user-to-item statuses, generate a question/response pair, and filter
// with a model judge. One record per list block. Stages run in a worker pool
// bounded by the gateway's max_concurrent; failures are collected per record
// and never abort the run.
class Pipeline {
 public:
  Pipeline(gateway::Gateway& gw, const listqa::PromptLibrary& prompts,
           const FewShotBank& bank, PipelineConfig config);

  listlogic::ListType classify_list_type(const corpus::Passage& passage,
                                         const corpus::ListBlock& block);
  listlogic::LogicalRelation classify_logical_relation(const corpus::Passage& passage,
                                                       const corpus::ListBlock& block);
  std::pair<std::string, std::string> generate_qa(const corpus::Passage& passage,
                                                  listlogic::ListType list_type,
                                                  const listlogic::StatusAssignment& assignment);
  FilterVerdict judge_record(const DatasetRecord& record,
                             const std::vector<corpus::Passage>& context_passages);

  PipelineResult run(const std::vector<corpus::Document>& corpus);

  const PipelineConfig& config() const { return config_; }

 private:
  std::string classify(const std::string& template_name, const corpus::Passage& passage,
                       const std::vector<std::string>& labels, const std::string& tag);

  gateway::Gateway& gateway_;
  const listqa::PromptLibrary& prompts_;
  const FewShotBank& bank_;
  PipelineConfig config_;
};

// Background sentence(s) describing a status assignment inside prompts.
std::string render_background(listlogic::ListType list_type,
                              const listlogic::StatusAssignment& assignment);

}  // namespace listqa::synthesis
