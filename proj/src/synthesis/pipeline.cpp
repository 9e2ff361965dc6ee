#include "listqa/synthesis/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "listqa/corpus/prompt_text.hpp"
#include "listqa/evalkit/metrics.hpp"
#include "listqa/listlogic/logic.hpp"
#include "listqa/util/rng.hpp"
#include "listqa/util/text.hpp"

namespace listqa::synthesis {

using listlogic::ListType;
using listlogic::LogicalRelation;
using listlogic::ShortAnswer;

Pipeline::Pipeline(gateway::Gateway& gw, const listqa::PromptLibrary& prompts,
                   const FewShotBank& bank, PipelineConfig config)
    : gateway_(gw), prompts_(prompts), bank_(bank), config_(std::move(config)) {
  double total = config_.train_ratio + config_.dev_ratio + config_.test_ratio;
  if (total <= 0.0) throw std::invalid_argument("split ratios must sum to a positive value");
}

namespace {

// Finds which of `labels` the classifier reply names. Exact match after
// canonicalization wins; otherwise the earliest word-boundary occurrence.
std::optional<std::string> match_label(const std::string& reply,
                                       const std::vector<std::string>& labels) {
  std::string canon = to_lower(reply);
  for (char& c : canon)
    if (c == '-' || c == '_' || c == '\n' || c == '\t' || c == '.' || c == ',' || c == '\'' ||
        c == '"' || c == '`')
      c = ' ';
  canon = " " + normalize_ws(canon) + " ";

  std::string exact = trim(canon);
  for (const auto& label : labels) {
    std::string l = to_lower(label);
    for (char& c : l)
      if (c == '-') c = ' ';
    if (exact == l) return label;
  }
  std::size_t best_pos = std::string::npos;
  std::string best_label;
  for (const auto& label : labels) {
    std::string l = to_lower(label);
    for (char& c : l)
      if (c == '-') c = ' ';
    std::size_t pos = canon.find(" " + l + " ");
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best_label = label;
    }
  }
  if (best_pos == std::string::npos) return std::nullopt;
  return best_label;
}

std::string exemplars_for_question(const std::array<Exemplar, 3>& exemplars) {
  std::ostringstream out;
  for (const auto& e : exemplars) {
    out << "Passage:\n" << e.passage << "\n";
    if (!e.background.empty()) out << e.background << "\n";
    out << "Question: " << e.question << "\n\n";
  }
  return out.str();
}

std::string exemplars_for_response(const std::array<Exemplar, 3>& exemplars) {
  std::ostringstream out;
  for (const auto& e : exemplars) {
    out << "Passage:\n" << e.passage << "\n";
    if (!e.background.empty()) out << e.background << "\n";
    out << "Question: " << e.question << "\n";
    out << "Response: " << e.response << "\n\n";
  }
  return out.str();
}

}  // namespace

std::string render_background(ListType list_type, const listlogic::StatusAssignment& assignment) {
  std::ostringstream out;
  switch (list_type) {
    case ListType::kCondition: {
      out << "User background: ";
      for (std::size_t i = 0; i < assignment.items.size(); ++i) {
        if (i > 0) out << ", ";
        out << "item [" << assignment.items[i].first << "] "
            << listlogic::to_token(assignment.items[i].second);
      }
      out << ".";
      if (assignment.deduced_answer)
        out << "\nConcluded answer: " << listlogic::to_token(*assignment.deduced_answer) << ".";
      break;
    }
    case ListType::kStep:
      out << "User background: the user has completed step [" << assignment.items.front().first
          << "] and asks what to do next.";
      break;
    case ListType::kOption:
      out << "User background: the user is using option [" << assignment.items.front().first
          << "] and asks about alternatives.";
      break;
    case ListType::kNonActionInfo:
      out << "User background: none; the question asks about the listed information directly.";
      break;
  }
  return out.str();
}

std::string Pipeline::classify(const std::string& template_name, const corpus::Passage& passage,
                               const std::vector<std::string>& labels, const std::string& tag) {
  std::string prompt =
      prompts_.render(template_name, {{"PASSAGE", corpus::render_prompt_text(passage, 1)}});
  gateway::CompletionRequest request;
  request.model = config_.model;
  request.user_text = prompt;
  request.max_output_tokens = config_.classify_max_tokens;
  request.temperature = 0.0;
  request.request_tag = tag;

  auto reply = gateway_.complete(request).text;
  auto label = match_label(reply, labels);
  if (!label) {
    // One retry with an explicit format reminder, then give up.
    gateway::CompletionRequest retry = request;
    retry.user_text += "\n\nAnswer with exactly one label and nothing else.";
    reply = gateway_.complete(retry).text;
    label = match_label(reply, labels);
    if (!label)
      throw ClassifierParseError("unparseable " + tag + " label for " + passage.passage_id +
                                 ": '" + reply + "'");
  }
  return *label;
}

ListType Pipeline::classify_list_type(const corpus::Passage& passage,
                                      const corpus::ListBlock& block) {
  (void)block;
  std::string label = classify("classify_list_type", passage,
                               {"condition", "step", "option", "non-action info"},
                               "classify_type");
  return *listlogic::list_type_from_token(label);
}

LogicalRelation Pipeline::classify_logical_relation(const corpus::Passage& passage,
                                                    const corpus::ListBlock& block) {
  if (block.list_type != ListType::kCondition)
    throw std::invalid_argument("logical relation is only defined for condition lists");
  std::string label = classify("classify_logical_relation", passage, {"and", "or"},
                               "classify_relation");
  return *listlogic::relation_from_token(label);
}

std::pair<std::string, std::string> Pipeline::generate_qa(
    const corpus::Passage& passage, ListType list_type,
    const listlogic::StatusAssignment& assignment) {
  const auto& exemplars = bank_.for_type(list_type);
  std::string passage_text = corpus::render_prompt_text(passage, 1);
  std::string background = render_background(list_type, assignment);

  gateway::CompletionRequest request;
  request.model = config_.model;
  request.max_output_tokens = config_.generate_max_tokens;
  request.temperature = config_.generation_temperature;

  request.request_tag = "gen_question";
  request.user_text = prompts_.render("generate_question",
                                      {{"EXAMPLES", exemplars_for_question(exemplars)},
                                       {"PASSAGE", passage_text},
                                       {"BACKGROUND", background}});
  std::string question = trim(gateway_.complete(request).text);
  if (question.empty()) throw EmptyGeneration("empty question for " + passage.passage_id);

  std::string guidance;
  if (list_type == ListType::kCondition && assignment.deduced_answer) {
    guidance = "Open the response with the concluded answer ('" +
               std::string(listlogic::to_token(*assignment.deduced_answer)) +
               "') and justify it from the conditions.";
  } else if (list_type == ListType::kStep) {
    guidance = "Name the step that comes after the one the user completed.";
  } else if (list_type == ListType::kOption) {
    guidance = "Suggest the listed alternatives the user has not mentioned.";
  } else {
    guidance = "Summarize the listed information the question asks about.";
  }

  request.request_tag = "gen_response";
  request.user_text = prompts_.render("generate_response",
                                      {{"EXAMPLES", exemplars_for_response(exemplars)},
                                       {"PASSAGE", passage_text},
                                       {"BACKGROUND", background},
                                       {"GUIDANCE", guidance},
                                       {"QUESTION", question}});
  std::string response = trim(gateway_.complete(request).text);
  if (response.empty()) throw EmptyGeneration("empty response for " + passage.passage_id);
  return {question, response};
}

FilterVerdict Pipeline::judge_record(const DatasetRecord& record,
                                     const std::vector<corpus::Passage>& context_passages) {
  std::string context = corpus::render_prompt_passages(context_passages);
  gateway::CompletionRequest request;
  request.model = config_.model;
  request.max_output_tokens = config_.judge_max_tokens;
  request.temperature = 0.0;
  request.request_tag = "judge";
  request.user_text = prompts_.render("filter_judge", {{"CONTEXT", context},
                                                       {"QUESTION", record.question},
                                                       {"RESPONSE", record.response}});

  std::string raw = gateway_.complete(request).text;
  try {
    return make_filter_verdict(evalkit::parse_judge_tags(raw, /*require_answerable=*/true), raw);
  } catch (const evalkit::JudgeTagParseError&) {
    gateway::CompletionRequest retry = request;
    retry.user_text += "\n\nRemember to output every assessment inside its tags.";
    raw = gateway_.complete(retry).text;
    try {
      return make_filter_verdict(evalkit::parse_judge_tags(raw, true), raw);
    } catch (const evalkit::JudgeTagParseError& e) {
      throw JudgeUnparseable(std::string("judge output unparseable after reprompt: ") + e.what());
    }
  }
}

namespace {

struct Task {
  const corpus::Document* doc;
  const corpus::Passage* passage;
  int block_index;
};

}  // namespace

PipelineResult Pipeline::run(const std::vector<corpus::Document>& corpus_docs) {
  PipelineResult result;
  PipelineReport& report = result.report;

  std::vector<Task> tasks;
  for (const auto& doc : corpus_docs) {
    for (const auto& passage : doc.passages) {
      if (!passage.has_list()) continue;
      ++report.passages_with_lists;
      for (int b = 0; b < static_cast<int>(passage.list_blocks.size()); ++b)
        tasks.push_back(Task{&doc, &passage, b});
    }
  }
  report.blocks_total = static_cast<int>(tasks.size());

  struct Outcome {
    std::optional<DatasetRecord> record;
    std::optional<RecordFailure> failure;
  };
  std::vector<Outcome> outcomes(tasks.size());

  auto run_task = [&](std::size_t i) {
    const Task& task = tasks[i];
    const corpus::Passage& passage = *task.passage;
    std::string record_id = passage.passage_id + "-b" + std::to_string(task.block_index);
    std::string stage = "classify_type";
    try {
      corpus::ListBlock block = passage.list_blocks[static_cast<std::size_t>(task.block_index)];
      ListType list_type = classify_list_type(passage, block);
      block.list_type = list_type;

      std::optional<LogicalRelation> relation;
      if (list_type == ListType::kCondition) {
        stage = "classify_relation";
        relation = classify_logical_relation(passage, block);
        block.logical_relation = relation;
      }

      stage = "sample_statuses";
      std::uint64_t record_seed = mix_seed(config_.seed, fnv1a64(record_id));
      auto assignment = listlogic::sample_status_assignment(
          block.item_line_ids, {passage.passage_id, task.block_index}, list_type, relation,
          record_seed);

      stage = "generate";
      auto [question, response] = generate_qa(passage, list_type, assignment);

      DatasetRecord record;
      record.record_id = record_id;
      bool unseen = std::find(config_.unseen_sources.begin(), config_.unseen_sources.end(),
                              task.doc->source_name) != config_.unseen_sources.end();
      record.source = unseen ? "unseen" : "seen";
      record.passage_refs = {passage.passage_id};
      record.list_type = list_type;
      record.logical_relation = relation;
      record.status_assignment = assignment;
      record.question = question;
      record.response = response;
      record.seed = record_seed;

      if (config_.filtering) {
        stage = "judge";
        record.filter_verdict = judge_record(record, {passage});
      }
      outcomes[i].record = std::move(record);
    } catch (const std::exception& e) {
      outcomes[i].failure = RecordFailure{record_id, stage, e.what()};
    }
  };

  // Bounded worker pool; the gateway additionally throttles in-flight calls.
  std::size_t workers = std::min<std::size_t>(
      tasks.size(), static_cast<std::size_t>(std::max(1, gateway_.config().max_concurrent)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          run_task(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic split assignment over kept records, in corpus order.
  double total_ratio = config_.train_ratio + config_.dev_ratio + config_.test_ratio;
  SplitMix64 split_rng(mix_seed(config_.seed, fnv1a64("split-assignment")));

  for (auto& outcome : outcomes) {
    if (outcome.failure) {
      ++report.dropped_by_error;
      report.failures.push_back(*outcome.failure);
      continue;
    }
    DatasetRecord& record = *outcome.record;
    ++report.records_generated;
    ++report.generated_per_type[record.list_type];
    if (record.status_assignment.deduced_answer)
      ++report.deduced_distribution[*record.status_assignment.deduced_answer];

    bool keep = !config_.filtering || (record.filter_verdict && record.filter_verdict->keep);
    if (keep) {
      double u = split_rng.next_unit() * total_ratio;
      if (u < config_.train_ratio) record.split = "train";
      else if (u < config_.train_ratio + config_.dev_ratio) record.split = "dev";
      else record.split = "test";
      ++report.kept;
      ++report.kept_per_type[record.list_type];
      ++report.split_counts[record.split];
    } else {
      ++report.dropped_by_verdict;
    }
    result.records.push_back(std::move(record));
  }

  // Lexical diversity of the kept samples.
  std::string questions;
  std::string responses;
  for (const auto& r : result.records) {
    if (r.split.empty()) continue;
    questions += r.question + "\n";
    responses += r.response + "\n";
  }
  if (!trim_view(questions).empty()) report.question_mtld = evalkit::mtld(questions);
  if (!trim_view(responses).empty()) report.response_mtld = evalkit::mtld(responses);

  return result;
}

nlohmann::json report_to_json(const PipelineReport& report) {
  using nlohmann::json;
  json per_type = json::object();
  for (const auto& [type, count] : report.generated_per_type)
    per_type[std::string(listlogic::to_token(type))] = count;
  json kept_type = json::object();
  for (const auto& [type, count] : report.kept_per_type)
    kept_type[std::string(listlogic::to_token(type))] = count;
  json deduced = json::object();
  for (const auto& [answer, count] : report.deduced_distribution)
    deduced[std::string(listlogic::to_token(answer))] = count;
  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"record_id", f.record_id}, {"stage", f.stage}, {"message", f.message}});
  return json{{"passages_with_lists", report.passages_with_lists},
              {"blocks_total", report.blocks_total},
              {"records_generated", report.records_generated},
              {"kept", report.kept},
              {"dropped_by_verdict", report.dropped_by_verdict},
              {"dropped_by_error", report.dropped_by_error},
              {"retention", report.retention()},
              {"generated_per_type", std::move(per_type)},
              {"kept_per_type", std::move(kept_type)},
              {"deduced_answer_distribution", std::move(deduced)},
              {"split_counts", report.split_counts},
              {"question_mtld", report.question_mtld},
              {"response_mtld", report.response_mtld},
              {"failures", std::move(failures)}};
}

}  // namespace listqa::synthesis
