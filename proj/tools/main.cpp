#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "listqa/cli/commands.hpp"
#include "listqa/evalkit/report.hpp"
#include "listqa/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> top_k;
  std::optional<std::string> mode;
  std::optional<std::string> replay;
  bool record = false;
  std::optional<std::string> out_dir;
  std::optional<int> shots;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Run configuration file")->required();
  cmd->add_option("--seed", flags.seed, "Override the pipeline seed");
  cmd->add_option("--top-k", flags.top_k, "Passages retrieved per question (default 3)");
  cmd->add_option("--mode", flags.mode, "Answering mode: isl or direct");
  cmd->add_option("--replay", flags.replay, "Session file to replay (or record with --record)");
  cmd->add_flag("--record", flags.record, "Record provider traffic into the --replay file");
  cmd->add_option("--out", flags.out_dir, "Output directory override");
  cmd->add_option("--shots", flags.shots, "In-context examples for answering (0 or 4)");
}

listqa::cli::RunConfig resolve_config(const CommonFlags& flags) {
  auto cfg = listqa::cli::load_config(flags.config_path);
  if (flags.seed) cfg.pipeline.seed = *flags.seed;
  if (flags.top_k) cfg.top_k = *flags.top_k;
  if (flags.mode) cfg.answer_mode = *flags.mode;
  if (flags.replay) cfg.replay_session = std::filesystem::path(*flags.replay);
  if (flags.record) cfg.record_session = true;
  if (flags.out_dir) cfg.out_dir = std::filesystem::path(*flags.out_dir);
  if (flags.shots) cfg.shots = *flags.shots;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(listqa::kToolName) +
               " - list-grounded QA dataset synthesis and evaluation"};
  app.set_version_flag("--version", listqa::kToolVersion);
  app.require_subcommand(1);

  CommonFlags ingest_flags;
  auto* ingest = app.add_subcommand("ingest", "Parse HTML documents into a corpus file");
  add_common(ingest, ingest_flags);

  CommonFlags synth_flags;
  auto* synthesize =
      app.add_subcommand("synthesize", "Run the four-step dataset creation pipeline");
  add_common(synthesize, synth_flags);

  CommonFlags index_flags;
  auto* index = app.add_subcommand("index", "Build and persist the passage index");
  add_common(index, index_flags);

  CommonFlags answer_flags;
  std::string question;
  std::string answer_split;
  auto* answer = app.add_subcommand("answer", "Answer a question (or a dataset split) with retrieval");
  add_common(answer, answer_flags);
  answer->add_option("--question", question, "Single question to answer");
  answer->add_option("--split", answer_split, "Answer every dataset record in this split");

  CommonFlags eval_flags;
  std::string dataset_override;
  std::string answers_override;
  auto* evaluate = app.add_subcommand("evaluate", "Score an answers file against the dataset");
  add_common(evaluate, eval_flags);
  evaluate->add_option("--dataset", dataset_override, "Dataset file (default: <out>/dataset.jsonl)");
  evaluate->add_option("--answers", answers_override, "Answers file (default: <out>/answers.jsonl)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto cfg = resolve_config(ingest_flags);
      auto result = listqa::cli::cmd_ingest(cfg);
      std::cout << "corpus: " << result.corpus_file.string() << " (" << result.documents
                << " documents, " << result.passages << " passages, " << result.failures
                << " failures)\n";
      return result.failures > 0 && result.documents == 0 ? 1 : 0;
    }
    if (synthesize->parsed()) {
      auto cfg = resolve_config(synth_flags);
      auto result = listqa::cli::cmd_synthesize(cfg);
      std::cout << "dataset: " << result.dataset_file.string() << '\n'
                << "kept " << result.report.kept << "/" << result.report.records_generated
                << " records (retention " << result.report.retention() << ", "
                << result.report.dropped_by_error << " errors)\n";
      return 0;
    }
    if (index->parsed()) {
      auto cfg = resolve_config(index_flags);
      auto result = listqa::cli::cmd_index(cfg);
      std::cout << "index: " << result.index_file.string() << " (" << result.passages
                << " passages)\n";
      return 0;
    }
    if (answer->parsed()) {
      auto cfg = resolve_config(answer_flags);
      if (!question.empty()) {
        listqa::cli::AnswerRequest request{question, cfg.answer_mode, cfg.shots};
        std::cout << listqa::cli::cmd_answer(cfg, request).dump(2) << '\n';
        return 0;
      }
      auto result = listqa::cli::cmd_answer_batch(cfg, listqa::cli::dataset_path(cfg),
                                                  answer_split);
      std::cout << "answers: " << result.answers_file.string() << " (" << result.answered
                << " answered, " << result.failures << " failures)\n";
      return result.failures > 0 && result.answered == 0 ? 1 : 0;
    }
    if (evaluate->parsed()) {
      auto cfg = resolve_config(eval_flags);
      auto dataset = dataset_override.empty() ? listqa::cli::dataset_path(cfg)
                                              : std::filesystem::path(dataset_override);
      auto answers = answers_override.empty() ? listqa::cli::answers_path(cfg)
                                              : std::filesystem::path(answers_override);
      auto result = listqa::cli::cmd_evaluate(cfg, dataset, answers);
      std::cout << listqa::evalkit::render_report_table(result.report);
      std::cout << "verdicts: " << result.verdicts_file.string() << " (" << result.evaluated
                << " evaluated, " << result.failures << " failures)\n";
      return result.failures > 0 && result.evaluated == 0 ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
