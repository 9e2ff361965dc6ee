#include "listqa/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <unordered_map>

#include "listqa/corpus/html_parser.hpp"
#include "listqa/corpus/io.hpp"
#include "listqa/corpus/prompt_text.hpp"
#include "listqa/evalkit/judge.hpp"
#include "listqa/evalkit/metrics.hpp"
#include "listqa/gateway/http_provider.hpp"
#include "listqa/gateway/mock_provider.hpp"
#include "listqa/gateway/session.hpp"
#include "listqa/isl/isl.hpp"
#include "listqa/retrieval/index.hpp"
#include "listqa/util/rng.hpp"
#include "listqa/util/text.hpp"
#include "listqa/version.hpp"

namespace listqa::cli {

using nlohmann::json;

namespace {

constexpr const char* kUnanswerableResponse =
    "I could not find the information needed to answer this question in the available documents.";

std::ifstream open_artifact(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(what + " not found: " + path.string() +
                                 " (run the producing command first)");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

GatewayHandle make_gateway(const RunConfig& cfg) {
  gateway::ProviderPtr inner;
  if (cfg.replay_session && !cfg.record_session) {
    // Pure replay: never construct a network-capable provider.
    inner = gateway::open_session(*cfg.replay_session, /*record=*/false);
  } else {
    if (cfg.provider_kind == "mock") {
      if (cfg.mock_script.empty())
        throw ConfigError("provider kind 'mock' requires provider.mock_script");
      inner = gateway::MockProvider::from_script_file(cfg.mock_script);
    } else {
      inner = std::make_shared<gateway::HttpProvider>(cfg.provider);
    }
    if (cfg.replay_session && cfg.record_session)
      inner = gateway::open_session(*cfg.replay_session, /*record=*/true, inner);
  }
  GatewayHandle handle;
  handle.provider = inner;
  handle.gw = std::make_unique<gateway::Gateway>(inner, cfg.provider);
  return handle;
}

std::filesystem::path corpus_path(const RunConfig& cfg) { return cfg.out_dir / "corpus.jsonl"; }
std::filesystem::path dataset_path(const RunConfig& cfg) { return cfg.out_dir / "dataset.jsonl"; }
std::filesystem::path rejected_path(const RunConfig& cfg) { return cfg.out_dir / "rejected.jsonl"; }
std::filesystem::path pipeline_report_path(const RunConfig& cfg) {
  return cfg.out_dir / "pipeline_report.json";
}
std::filesystem::path index_path(const RunConfig& cfg) { return cfg.out_dir / "index.jsonl"; }
std::filesystem::path answers_path(const RunConfig& cfg) { return cfg.out_dir / "answers.jsonl"; }
std::filesystem::path verdicts_path(const RunConfig& cfg) { return cfg.out_dir / "verdicts.jsonl"; }
std::filesystem::path eval_report_path(const RunConfig& cfg) {
  return cfg.out_dir / "eval_report.json";
}

json file_header(const RunConfig& cfg) {
  return json{{"type", "header"},
              {"tool", kToolName},
              {"version", kToolVersion},
              {"config_digest", cfg.config_digest},
              {"seed", cfg.pipeline.seed}};
}

IngestResult cmd_ingest(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw ConfigError("[corpus] manifest is required for ingest");
  auto entries = corpus::read_manifest(cfg.manifest);
  IngestResult result;
  result.corpus_file = corpus_path(cfg);
  auto out = open_output(result.corpus_file);
  out << file_header(cfg).dump() << '\n';
  for (const auto& entry : entries) {
    try {
      std::ifstream in(entry.path);
      if (!in) throw std::runtime_error("cannot open " + entry.path.string());
      std::string html((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      corpus::Document doc = corpus::parse_html(html, entry.doc_id, entry.source_name);
      for (const auto& p : doc.passages) {
        out << corpus::passage_to_json(doc, p).dump() << '\n';
        ++result.passages;
      }
      ++result.documents;
    } catch (const std::exception& e) {
      // Per-document failures are reported, never fatal to the corpus run.
      std::cerr << "ingest: " << entry.doc_id << ": " << e.what() << '\n';
      ++result.failures;
    }
  }
  return result;
}

SynthesizeResult cmd_synthesize(const RunConfig& cfg) {
  auto docs = corpus::read_corpus_file(corpus_path(cfg));
  auto handle = make_gateway(cfg);
  PromptLibrary prompts(cfg.prompt_dir);
  synthesis::FewShotBank bank = synthesis::FewShotBank::from_file(cfg.fewshot_bank);
  synthesis::Pipeline pipeline(*handle.gw, prompts, bank, cfg.pipeline);
  synthesis::PipelineResult run = pipeline.run(docs);

  SynthesizeResult result;
  result.dataset_file = dataset_path(cfg);
  result.rejected_file = rejected_path(cfg);
  result.report_file = pipeline_report_path(cfg);
  result.report = run.report;

  auto dataset = open_output(result.dataset_file);
  auto rejected = open_output(result.rejected_file);
  dataset << file_header(cfg).dump() << '\n';
  rejected << file_header(cfg).dump() << '\n';
  for (const auto& record : run.records) {
    if (!record.split.empty())
      dataset << synthesis::record_to_json(record).dump() << '\n';
    else
      rejected << synthesis::record_to_json(record).dump() << '\n';
  }
  auto report_out = open_output(result.report_file);
  json report_json = synthesis::report_to_json(run.report);
  report_json["header"] = file_header(cfg);
  report_out << report_json.dump(2) << '\n';
  return result;
}

namespace {

std::vector<corpus::Passage> passages_for_index(const RunConfig& cfg,
                                                const std::vector<corpus::Document>& docs) {
  if (!cfg.index_all_passages) return corpus::select_list_passages(docs);
  std::vector<corpus::Passage> out;
  for (const auto& doc : docs)
    for (const auto& p : doc.passages)
      if (!p.empty() || !p.title.empty()) out.push_back(p);
  return out;
}

}  // namespace

IndexBuildResult cmd_index(const RunConfig& cfg) {
  auto docs = corpus::read_corpus_file(corpus_path(cfg));
  auto passages = passages_for_index(cfg, docs);
  IndexBuildResult result;
  result.passages = passages.size();
  result.index_file = index_path(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.retrieval_backend == "embedding") {
    auto handle = make_gateway(cfg);
    auto index = retrieval::build_index(passages, retrieval::Backend::kEmbedding, handle.gw.get());
    index.save(result.index_file);
  } else {
    auto index = retrieval::build_index(passages, retrieval::Backend::kLexical);
    index.save(result.index_file);
  }
  return result;
}

namespace {

// Few-shot exemplars for answering: one kept train record per list type,
// chosen with the run seed.
std::vector<synthesis::DatasetRecord> pick_shot_records(
    const RunConfig& cfg, const std::filesystem::path& dataset_file, int shots) {
  if (shots <= 0) return {};
  auto in = open_artifact(dataset_file, "dataset file");
  std::map<listlogic::ListType, std::vector<synthesis::DatasetRecord>> by_type;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    json row = json::parse(t);
    if (row.contains("type") && row["type"] == "header") continue;
    auto record = synthesis::record_from_json(row);
    if (record.split == "train") by_type[record.list_type].push_back(std::move(record));
  }
  SplitMix64 rng(mix_seed(cfg.pipeline.seed, fnv1a64("answer-shots")));
  std::vector<synthesis::DatasetRecord> picked;
  for (auto& [type, records] : by_type) {
    if (records.empty()) continue;
    picked.push_back(records[rng.next_below(records.size())]);
    if (static_cast<int>(picked.size()) >= shots) break;
  }
  return picked;
}

struct AnswerContext {
  retrieval::PassageIndex index;
  std::unordered_map<std::string, corpus::Passage> passages_by_id;
  std::vector<synthesis::DatasetRecord> shot_records;
};

AnswerContext load_answer_context(const RunConfig& cfg, int shots,
                                  const std::filesystem::path& dataset_file) {
  AnswerContext ctx{retrieval::PassageIndex::load(index_path(cfg)), {}, {}};
  auto docs = corpus::read_corpus_file(corpus_path(cfg));
  for (const auto& doc : docs)
    for (const auto& p : doc.passages) ctx.passages_by_id.emplace(p.passage_id, p);
  if (shots > 0) ctx.shot_records = pick_shot_records(cfg, dataset_file, shots);
  return ctx;
}

// Reconstructs the intermediate-step block of a dataset record, for few-shot
// example rendering.
isl::IslAnswer record_to_isl(const synthesis::DatasetRecord& record) {
  isl::IslAnswer answer;
  answer.block.relevant_passage = 1;
  answer.block.list_type = record.list_type;
  if (record.list_type == listlogic::ListType::kCondition) {
    answer.block.user_item_statuses = record.status_assignment.items;
    answer.block.logical_relation = record.logical_relation;
  } else if (record.list_type != listlogic::ListType::kNonActionInfo) {
    for (const auto& [line_id, status] : record.status_assignment.items)
      answer.block.selected_items.push_back(line_id);
  }
  answer.response = record.response;
  return answer;
}

std::string render_shots(const AnswerContext& ctx, const std::string& mode) {
  std::string out;
  int k = 0;
  for (const auto& record : ctx.shot_records) {
    auto it = ctx.passages_by_id.find(record.passage_refs.front());
    if (it == ctx.passages_by_id.end()) continue;
    ++k;
    out += "Example " + std::to_string(k) + ":\n";
    out += corpus::render_prompt_text(it->second, 1);
    out += "User question: " + record.question + "\n";
    if (mode == "isl")
      out += isl::render_isl(record_to_isl(record)) + "\n\n";
    else
      out += "Response: " + record.response + "\n\n";
  }
  return out;
}

json answer_one(const RunConfig& cfg, gateway::Gateway& gw, const PromptLibrary& prompts,
                const AnswerContext& ctx, const std::string& question, const std::string& mode,
                int shots) {
  json row;
  row["question"] = question;
  row["mode"] = mode;

  retrieval::RetrievalResult hits = retrieval::retrieve(
      ctx.index, question, cfg.top_k,
      ctx.index.backend() == retrieval::Backend::kEmbedding ? &gw : nullptr, cfg.score_floor);
  json retrieved = json::array();
  for (const auto& s : hits.ranked)
    retrieved.push_back({{"passage_id", s.passage_id}, {"score", s.score}});
  row["retrieved"] = std::move(retrieved);

  if (retrieval::route(hits) == retrieval::Routing::kUnanswerable) {
    row["routing"] = "unanswerable";
    row["response"] = kUnanswerableResponse;
    if (mode == "isl") {
      isl::IslAnswer canned;
      canned.response = kUnanswerableResponse;
      row["isl_text"] = isl::render_isl(canned);
      row["isl_ok"] = true;
      row["relevant_passage"] = nullptr;
    }
    return row;
  }
  row["routing"] = "answerable";

  std::vector<corpus::Passage> prompt_passages;
  for (const auto& s : hits.ranked) {
    auto it = ctx.passages_by_id.find(s.passage_id);
    if (it == ctx.passages_by_id.end())
      throw MissingArtifact("index references passage missing from corpus: " + s.passage_id);
    prompt_passages.push_back(it->second);
  }

  gateway::CompletionRequest request;
  request.model = cfg.provider.model;
  request.max_output_tokens = cfg.answer_max_tokens;
  request.temperature = 0.0;
  request.request_tag = "answer";
  request.user_text =
      prompts.render(mode == "isl" ? "answer_isl" : "answer_direct",
                     {{"EXAMPLES", shots > 0 ? render_shots(ctx, mode) : ""},
                      {"PASSAGES", corpus::render_prompt_passages(prompt_passages)},
                      {"QUESTION", question}});
  std::string reply = gw.complete(request).text;

  if (mode != "isl") {
    row["response"] = trim(reply);
    return row;
  }

  row["isl_text"] = reply;
  try {
    isl::IslAnswer parsed = isl::parse_isl(reply);
    row["isl_ok"] = true;
    row["response"] = parsed.response;
    row["relevant_passage"] =
        parsed.block.relevant_passage ? json(*parsed.block.relevant_passage) : json(nullptr);
    if (parsed.block.list_type)
      row["list_type"] = std::string(listlogic::to_token(*parsed.block.list_type));
    isl::ConsistencyReport consistency = isl::check_consistency(parsed, prompt_passages);
    json findings = json::array();
    for (const auto& f : consistency.findings) findings.push_back(f.message);
    row["consistency_findings"] = std::move(findings);
    if (consistency.deduced)
      row["deduced_answer"] = std::string(listlogic::to_token(*consistency.deduced));
  } catch (const std::exception& e) {
    // Keep the raw reply as the response so evaluation still has something.
    row["isl_ok"] = false;
    row["isl_error"] = e.what();
    row["response"] = trim(reply);
  }
  return row;
}

}  // namespace

json cmd_answer(const RunConfig& cfg, const AnswerRequest& request) {
  if (trim_view(request.question).empty()) throw ConfigError("answer requires a question");
  auto handle = make_gateway(cfg);
  PromptLibrary prompts(cfg.prompt_dir);
  AnswerContext ctx = load_answer_context(cfg, request.shots, dataset_path(cfg));
  return answer_one(cfg, *handle.gw, prompts, ctx, request.question, request.mode, request.shots);
}

AnswerBatchResult cmd_answer_batch(const RunConfig& cfg, const std::filesystem::path& dataset_file,
                                   const std::string& split) {
  auto handle = make_gateway(cfg);
  PromptLibrary prompts(cfg.prompt_dir);
  AnswerContext ctx = load_answer_context(cfg, cfg.shots, dataset_file);

  auto in = open_artifact(dataset_file, "dataset file");
  AnswerBatchResult result;
  result.answers_file = answers_path(cfg);
  auto out = open_output(result.answers_file);
  out << file_header(cfg).dump() << '\n';

  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    json raw = json::parse(t);
    if (raw.contains("type") && raw["type"] == "header") continue;
    auto record = synthesis::record_from_json(raw);
    if (!split.empty() && record.split != split) continue;
    try {
      json row = answer_one(cfg, *handle.gw, prompts, ctx, record.question, cfg.answer_mode,
                            cfg.shots);
      row["record_id"] = record.record_id;
      out << row.dump() << '\n';
      ++result.answered;
    } catch (const std::exception& e) {
      std::cerr << "answer: " << record.record_id << ": " << e.what() << '\n';
      ++result.failures;
    }
  }
  return result;
}

EvaluateResult cmd_evaluate(const RunConfig& cfg, const std::filesystem::path& dataset_file,
                            const std::filesystem::path& answers_file) {
  // References and grouping keys come from the dataset records.
  std::unordered_map<std::string, synthesis::DatasetRecord> records;
  std::vector<evalkit::RecordInfo> infos;
  {
    auto in = open_artifact(dataset_file, "dataset file");
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty()) continue;
      json raw = json::parse(t);
      if (raw.contains("type") && raw["type"] == "header") continue;
      auto record = synthesis::record_from_json(raw);
      infos.push_back({record.record_id, record.list_type, record.source});
      records.emplace(record.record_id, std::move(record));
    }
  }
  std::unordered_map<std::string, corpus::Passage> passages_by_id;
  for (const auto& doc : corpus::read_corpus_file(corpus_path(cfg)))
    for (const auto& p : doc.passages) passages_by_id.emplace(p.passage_id, p);

  auto handle = make_gateway(cfg);
  PromptLibrary prompts(cfg.prompt_dir);
  evalkit::JudgeSettings judge_settings;
  judge_settings.model = cfg.provider.model;

  EvaluateResult result;
  result.verdicts_file = verdicts_path(cfg);
  result.report_file = eval_report_path(cfg);
  auto out = open_output(result.verdicts_file);
  out << file_header(cfg).dump() << '\n';

  std::vector<evalkit::EvalVerdict> verdicts;
  auto in = open_artifact(answers_file, "answers file");
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    json row = json::parse(t);
    if (row.contains("type") && row["type"] == "header") continue;
    std::string record_id = row.at("record_id").get<std::string>();
    auto rec_it = records.find(record_id);
    if (rec_it == records.end()) throw evalkit::UnknownRecordId(record_id);
    const synthesis::DatasetRecord& record = rec_it->second;
    try {
      std::string candidate = row.at("response").get<std::string>();
      evalkit::EvalVerdict verdict;
      verdict.record_id = record_id;
      verdict.rouge_l = evalkit::rouge_l(candidate, record.response);

      std::string context;
      for (const auto& ref : record.passage_refs) {
        auto p_it = passages_by_id.find(ref);
        if (p_it == passages_by_id.end())
          throw MissingArtifact("record references passage missing from corpus: " + ref);
        context += corpus::render_prompt_text(p_it->second, 1);
      }
      auto outcome = evalkit::judge_response(*handle.gw, prompts, judge_settings, context,
                                             record.question, candidate);
      verdict.correctness = outcome.correctness;
      verdict.faithfulness = outcome.faithfulness;
      verdict.completeness = outcome.completeness;

      out << evalkit::verdict_to_json(verdict).dump() << '\n';
      verdicts.push_back(std::move(verdict));
      ++result.evaluated;
    } catch (const std::exception& e) {
      std::cerr << "evaluate: " << record_id << ": " << e.what() << '\n';
      ++result.failures;
    }
  }

  result.report = evalkit::aggregate(verdicts, infos);
  json report_json = evalkit::report_to_json(result.report);
  report_json["header"] = file_header(cfg);
  auto report_out = open_output(result.report_file);
  report_out << report_json.dump(2) << '\n';
  return result;
}

}  // namespace listqa::cli
