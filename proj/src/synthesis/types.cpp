#include "listqa/synthesis/types.hpp"

#include <fstream>

#include "listqa/listlogic/logic.hpp"

namespace listqa::synthesis {

using evalkit::Grade;
using nlohmann::json;

FilterVerdict make_filter_verdict(const evalkit::JudgeTags& tags, std::string raw_text) {
  FilterVerdict v;
  v.answerable = tags.answerable.value_or(false);
  if (v.answerable) {
    v.correctness = tags.correctness;
    v.faithfulness = tags.faithfulness;
    v.completeness = tags.completeness;
  }
  v.keep = v.answerable && v.correctness == Grade::kPositive &&
           v.faithfulness == Grade::kPositive && v.completeness == Grade::kPositive;
  v.raw_judge_text = std::move(raw_text);
  return v;
}

namespace {

json verdict_to_json(const FilterVerdict& v) {
  using evalkit::grade_token;
  return json{{"answerable", v.answerable},
              {"correctness", std::string(grade_token(v.correctness, "correct", "incorrect"))},
              {"faithfulness", std::string(grade_token(v.faithfulness, "faithful", "unfaithful"))},
              {"completeness", std::string(grade_token(v.completeness, "complete", "incomplete"))},
              {"keep", v.keep},
              {"raw_judge_text", v.raw_judge_text}};
}

Grade grade_from(const json& j, const std::string& key, const std::string& pos,
                 const std::string& neg) {
  std::string t = j.at(key).get<std::string>();
  if (t == pos) return Grade::kPositive;
  if (t == neg) return Grade::kNegative;
  return Grade::kNa;
}

FilterVerdict verdict_from_json(const json& j) {
  FilterVerdict v;
  v.answerable = j.at("answerable").get<bool>();
  v.correctness = grade_from(j, "correctness", "correct", "incorrect");
  v.faithfulness = grade_from(j, "faithfulness", "faithful", "unfaithful");
  v.completeness = grade_from(j, "completeness", "complete", "incomplete");
  v.keep = j.at("keep").get<bool>();
  v.raw_judge_text = j.at("raw_judge_text").get<std::string>();
  return v;
}

}  // namespace

json record_to_json(const DatasetRecord& r) {
  json items = json::array();
  for (const auto& [line_id, status] : r.status_assignment.items)
    items.push_back({{"line_id", line_id}, {"status", std::string(listlogic::to_token(status))}});
  json assignment{{"items", std::move(items)},
                  {"answer", r.status_assignment.deduced_answer
                                 ? json(std::string(listlogic::to_token(
                                       *r.status_assignment.deduced_answer)))
                                 : json(nullptr)},
                  {"seed", r.status_assignment.rng_seed}};
  return json{
      {"record_id", r.record_id},
      {"source", r.source},
      {"passage_refs", r.passage_refs},
      {"list_type", std::string(listlogic::to_token(r.list_type))},
      {"logical_relation",
       r.logical_relation ? json(std::string(listlogic::to_token(*r.logical_relation)))
                          : json(nullptr)},
      {"status_assignment", std::move(assignment)},
      {"question", r.question},
      {"response", r.response},
      {"filter_verdict", r.filter_verdict ? verdict_to_json(*r.filter_verdict) : json(nullptr)},
      {"split", r.split},
      {"seed", r.seed}};
}

DatasetRecord record_from_json(const json& j) {
  DatasetRecord r;
  r.record_id = j.at("record_id").get<std::string>();
  r.source = j.at("source").get<std::string>();
  r.passage_refs = j.at("passage_refs").get<std::vector<std::string>>();
  auto type = listlogic::list_type_from_token(j.at("list_type").get<std::string>());
  if (!type) throw std::runtime_error("bad list_type token in record " + r.record_id);
  r.list_type = *type;
  if (!j.at("logical_relation").is_null()) {
    auto rel = listlogic::relation_from_token(j.at("logical_relation").get<std::string>());
    if (!rel) throw std::runtime_error("bad logical_relation token in record " + r.record_id);
    r.logical_relation = rel;
  }
  const json& a = j.at("status_assignment");
  r.status_assignment.passage_id = r.passage_refs.empty() ? "" : r.passage_refs.front();
  for (const auto& item : a.at("items")) {
    auto status = listlogic::status_from_token(item.at("status").get<std::string>());
    if (!status) throw std::runtime_error("bad status token in record " + r.record_id);
    r.status_assignment.items.emplace_back(item.at("line_id").get<int>(), *status);
  }
  if (!a.at("answer").is_null()) {
    auto ans = listlogic::answer_from_token(a.at("answer").get<std::string>());
    if (!ans) throw std::runtime_error("bad answer token in record " + r.record_id);
    r.status_assignment.deduced_answer = ans;
  }
  r.status_assignment.rng_seed = a.at("seed").get<std::uint64_t>();
  r.question = j.at("question").get<std::string>();
  r.response = j.at("response").get<std::string>();
  if (!j.at("filter_verdict").is_null()) r.filter_verdict = verdict_from_json(j.at("filter_verdict"));
  r.split = j.at("split").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

FewShotBank::FewShotBank(std::map<listlogic::ListType, std::array<Exemplar, 3>> exemplars)
    : exemplars_(std::move(exemplars)) {
  static constexpr listlogic::ListType kTypes[] = {
      listlogic::ListType::kCondition, listlogic::ListType::kStep, listlogic::ListType::kOption,
      listlogic::ListType::kNonActionInfo};
  for (auto t : kTypes)
    if (exemplars_.find(t) == exemplars_.end())
      throw BankError("few-shot bank missing exemplars for type '" +
                      std::string(listlogic::to_token(t)) + "'");
}

FewShotBank FewShotBank::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BankError("cannot open few-shot bank: " + path.string());
  json j = json::parse(in);
  std::map<listlogic::ListType, std::array<Exemplar, 3>> exemplars;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto type = listlogic::list_type_from_token(it.key());
    if (!type) throw BankError("unknown list type key in bank: " + it.key());
    if (!it.value().is_array() || it.value().size() != 3)
      throw BankError("bank requires exactly 3 exemplars for '" + it.key() + "'");
    std::array<Exemplar, 3> arr;
    for (std::size_t i = 0; i < 3; ++i) {
      const json& e = it.value()[i];
      arr[i] = Exemplar{e.at("passage").get<std::string>(), e.value("background", ""),
                        e.at("question").get<std::string>(), e.at("response").get<std::string>()};
    }
    exemplars.emplace(*type, std::move(arr));
  }
  return FewShotBank(std::move(exemplars));
}

const std::array<Exemplar, 3>& FewShotBank::for_type(listlogic::ListType type) const {
  return exemplars_.at(type);
}

}  // namespace listqa::synthesis
