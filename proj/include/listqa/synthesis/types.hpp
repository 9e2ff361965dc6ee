#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "listqa/evalkit/judge_tags.hpp"
#include "listqa/listlogic/types.hpp"

namespace listqa::synthesis {

// Outcome of model-based filtering for one synthesized sample. A sample is
// kept only when the question is answerable and the response is judged
// correct, faithful and complete.
struct FilterVerdict {
  bool answerable = false;
  evalkit::Grade correctness = evalkit::Grade::kNa;
  evalkit::Grade faithfulness = evalkit::Grade::kNa;
  evalkit::Grade completeness = evalkit::Grade::kNa;
  bool keep = false;
  std::string raw_judge_text;
};

FilterVerdict make_filter_verdict(const evalkit::JudgeTags& tags, std::string raw_text);

// One synthesized QA sample with its provenance.
struct DatasetRecord {
  std::string record_id;
  std::string source;  // "seen" | "unseen"
  std::vector<std::string> passage_refs;  // gold passage first
  listlogic::ListType list_type = listlogic::ListType::kCondition;
  std::optional<listlogic::LogicalRelation> logical_relation;
  listlogic::StatusAssignment status_assignment;
  std::string question;
  std::string response;
  std::optional<FilterVerdict> filter_verdict;
  std::string split;  // "train" | "dev" | "test"; empty for dropped records
  std::uint64_t seed = 0;
};

nlohmann::json record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const nlohmann::json& j);

// One in-context example for question/response generation.
struct Exemplar {
  std::string passage;
  std::string background;
  std::string question;
  std::string response;
};

struct BankError : std::runtime_error {
  explicit BankError(const std::string& what) : std::runtime_error(what) {}
};

// Exactly three exemplars per list type.
class FewShotBank {
 public:
  FewShotBank(std::map<listlogic::ListType, std::array<Exemplar, 3>> exemplars);
  static FewShotBank from_file(const std::filesystem::path& path);

  const std::array<Exemplar, 3>& for_type(listlogic::ListType type) const;

 private:
  std::map<listlogic::ListType, std::array<Exemplar, 3>> exemplars_;
};

}  // namespace listqa::synthesis
