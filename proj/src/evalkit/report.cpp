#include "listqa/evalkit/report.hpp"

#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "listqa/listlogic/logic.hpp"

namespace listqa::evalkit {

using nlohmann::json;

namespace {

struct Accumulator {
  double rouge_sum = 0.0;
  int rouge_n = 0;
  int pos[3] = {0, 0, 0};
  int n[3] = {0, 0, 0};
  int records = 0;

  void add(const EvalVerdict& v) {
    ++records;
    rouge_sum += v.rouge_l;
    ++rouge_n;
    const Grade grades[3] = {v.correctness, v.faithfulness, v.completeness};
    for (int i = 0; i < 3; ++i) {
      if (grades[i] == Grade::kNa) continue;
      ++n[i];
      if (grades[i] == Grade::kPositive) ++pos[i];
    }
  }

  GroupStats stats() const {
    GroupStats g;
    g.records = records;
    g.rouge = {rouge_n > 0 ? 100.0 * rouge_sum / rouge_n : 0.0, rouge_n};
    MetricStat* dims[3] = {&g.correctness, &g.faithfulness, &g.completeness};
    for (int i = 0; i < 3; ++i)
      *dims[i] = {n[i] > 0 ? 100.0 * pos[i] / n[i] : 0.0, n[i]};
    g.average = (g.rouge.mean_pct + g.correctness.mean_pct + g.faithfulness.mean_pct +
                 g.completeness.mean_pct) /
                4.0;
    return g;
  }
};

}  // namespace

Report aggregate(const std::vector<EvalVerdict>& verdicts,
                 const std::vector<RecordInfo>& records) {
  if (verdicts.empty()) throw EmptyReport();
  std::unordered_map<std::string, const RecordInfo*> by_id;
  for (const auto& r : records) by_id[r.record_id] = &r;

  Accumulator overall;
  std::map<listlogic::ListType, Accumulator> by_type;
  std::map<std::string, Accumulator> by_domain;
  int na_judged = 0;

  for (const auto& v : verdicts) {
    auto it = by_id.find(v.record_id);
    if (it == by_id.end()) throw UnknownRecordId(v.record_id);
    overall.add(v);
    by_type[it->second->list_type].add(v);
    by_domain[it->second->domain].add(v);
    if (v.correctness == Grade::kNa && v.faithfulness == Grade::kNa &&
        v.completeness == Grade::kNa)
      ++na_judged;
  }

  Report report;
  report.overall = overall.stats();
  for (const auto& [type, acc] : by_type) report.by_list_type[type] = acc.stats();
  for (const auto& [domain, acc] : by_domain) report.by_domain[domain] = acc.stats();
  report.na_judged = na_judged;
  return report;
}

namespace {

json group_to_json(const GroupStats& g) {
  auto metric = [](const MetricStat& m) { return json{{"mean", m.mean_pct}, {"count", m.count}}; };
  return json{{"rouge_l", metric(g.rouge)},
              {"correctness", metric(g.correctness)},
              {"faithfulness", metric(g.faithfulness)},
              {"completeness", metric(g.completeness)},
              {"average", g.average},
              {"records", g.records}};
}

}  // namespace

json report_to_json(const Report& report) {
  json by_type = json::object();
  for (const auto& [type, g] : report.by_list_type)
    by_type[std::string(listlogic::to_token(type))] = group_to_json(g);
  json by_domain = json::object();
  for (const auto& [domain, g] : report.by_domain) by_domain[domain] = group_to_json(g);
  return json{{"overall", group_to_json(report.overall)},
              {"by_list_type", std::move(by_type)},
              {"by_domain", std::move(by_domain)},
              {"na_judged", report.na_judged}};
}

std::string render_report_table(const Report& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  auto row = [&out](const std::string& name, const GroupStats& g) {
    out << std::left << std::setw(18) << name << std::right << std::setw(9) << g.rouge.mean_pct
        << std::setw(13) << g.correctness.mean_pct << std::setw(14) << g.faithfulness.mean_pct
        << std::setw(14) << g.completeness.mean_pct << std::setw(10) << g.average << '\n';
  };
  out << std::left << std::setw(18) << "Group" << std::right << std::setw(9) << "ROUGE-L"
      << std::setw(13) << "Correctness" << std::setw(14) << "Faithfulness" << std::setw(14)
      << "Completeness" << std::setw(10) << "Average" << '\n';
  row("overall", report.overall);
  for (const auto& [type, g] : report.by_list_type)
    row(std::string(listlogic::to_token(type)), g);
  for (const auto& [domain, g] : report.by_domain) row(domain, g);
  out << "na-judged responses: " << report.na_judged << '\n';
  return out.str();
}

json verdict_to_json(const EvalVerdict& v) {
  return json{{"record_id", v.record_id},
              {"rouge_l", v.rouge_l},
              {"correctness", std::string(grade_token(v.correctness, "correct", "incorrect"))},
              {"faithfulness", std::string(grade_token(v.faithfulness, "faithful", "unfaithful"))},
              {"completeness", std::string(grade_token(v.completeness, "complete", "incomplete"))}};
}

namespace {

Grade grade_from_token(const std::string& token, const std::string& positive,
                       const std::string& negative) {
  if (token == positive) return Grade::kPositive;
  if (token == negative) return Grade::kNegative;
  if (token == "na") return Grade::kNa;
  throw std::runtime_error("bad grade token: " + token);
}

}  // namespace

EvalVerdict verdict_from_json(const json& j) {
  EvalVerdict v;
  v.record_id = j.at("record_id").get<std::string>();
  v.rouge_l = j.at("rouge_l").get<double>();
  v.correctness = grade_from_token(j.at("correctness").get<std::string>(), "correct", "incorrect");
  v.faithfulness = grade_from_token(j.at("faithfulness").get<std::string>(), "faithful", "unfaithful");
  v.completeness = grade_from_token(j.at("completeness").get<std::string>(), "complete", "incomplete");
  return v;
}

}  // namespace listqa::evalkit
