#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "listqa/evalkit/judge_tags.hpp"
#include "listqa/listlogic/types.hpp"

namespace listqa::evalkit {

// Per-response judgments plus the ROUGE-L score.
struct EvalVerdict {
  std::string record_id;
  double rouge_l = 0.0;  // [0,1]
  Grade correctness = Grade::kNa;
  Grade faithfulness = Grade::kNa;
  Grade completeness = Grade::kNa;
};

// What aggregation needs to know about a dataset record.
struct RecordInfo {
  std::string record_id;
  listlogic::ListType list_type = listlogic::ListType::kCondition;
  std::string domain;  // "seen" | "unseen"
};

struct UnknownRecordId : std::runtime_error {
  explicit UnknownRecordId(const std::string& id)
      : std::runtime_error("verdict references unknown record id: " + id) {}
};

struct EmptyReport : std::runtime_error {
  EmptyReport() : std::runtime_error("cannot aggregate an empty verdict list") {}
};

// Mean (percent) and the number of contributing entries for one metric.
struct MetricStat {
  double mean_pct = 0.0;
  int count = 0;
};

struct GroupStats {
  MetricStat rouge;
  MetricStat correctness;
  MetricStat faithfulness;
  MetricStat completeness;
  double average = 0.0;  // arithmetic mean of the four metric means
  int records = 0;
};

// Metric means in percent, overall and broken down by list type and domain.
// NA-judged dimensions are excluded from the means; their count is surfaced.
struct Report {
  GroupStats overall;
  std::map<listlogic::ListType, GroupStats> by_list_type;
  std::map<std::string, GroupStats> by_domain;
  int na_judged = 0;  // verdicts whose dimensions are all NA
};

Report aggregate(const std::vector<EvalVerdict>& verdicts, const std::vector<RecordInfo>& records);

nlohmann::json report_to_json(const Report& report);

// Plain-text table matching the report column layout:
// ROUGE-L | Correctness | Faithfulness | Completeness | Average.
std::string render_report_table(const Report& report);

nlohmann::json verdict_to_json(const EvalVerdict& v);
EvalVerdict verdict_from_json(const nlohmann::json& j);

}  // namespace listqa::evalkit
