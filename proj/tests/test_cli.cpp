#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "helpers.hpp"
#include "listqa/cli/commands.hpp"
#include "listqa/isl/isl.hpp"
#include "listqa/util/text.hpp"

using namespace listqa;
namespace lt = listqa::testing;
using nlohmann::json;

namespace {

std::string fixture_config(const std::filesystem::path& out_dir) {
  return "[corpus]\n"
         "manifest = " + (lt::fixtures_dir() / "corpus" / "manifest.txt").string() + "\n"
         "[provider]\n"
         "kind = mock\n"
         "mock_script = " + (lt::fixtures_dir() / "mock" / "pipeline_script.json").string() + "\n"
         "model = scripted\n"
         "max_concurrent = 2\n"
         "[pipeline]\n"
         "seed = 42\n"
         "unseen_sources = agencyhelp\n"
         "[splits]\n"
         "train = 0.55\n"
         "dev = 0.075\n"
         "test = 0.375\n"
         "[retrieval]\n"
         "backend = lexical\n"
         "top_k = 3\n"
         "[paths]\n"
         "prompt_dir = " + lt::prompts_dir().string() + "\n"
         "out_dir = " + out_dir.string() + "\n";
}

cli::RunConfig fixture_run_config(const lt::TempDir& tmp) {
  auto config_path = tmp.path() / "run.ini";
  lt::write_file(config_path, fixture_config(tmp.path() / "out"));
  return cli::load_config(config_path);
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) rows.push_back(json::parse(line));
  return rows;
}

}  // namespace

TEST_CASE("config loading and validation") {
  lt::TempDir tmp("config");
  auto cfg = fixture_run_config(tmp);
  CHECK(cfg.provider_kind == "mock");
  CHECK(cfg.top_k == 3);
  CHECK(cfg.pipeline.seed == 42);
  CHECK(cfg.pipeline.unseen_sources == std::vector<std::string>{"agencyhelp"});
  CHECK(cfg.pipeline.train_ratio == doctest::Approx(0.55));
  CHECK(cfg.config_digest.size() == 16);
  CHECK(cfg.fewshot_bank == lt::prompts_dir() / "fewshot_bank.json");

  lt::write_file(tmp.path() / "bad.ini", "[nope]\nkey = 1\n");
  CHECK_THROWS_AS(cli::load_config(tmp.path() / "bad.ini"), cli::ConfigError);
  lt::write_file(tmp.path() / "bad2.ini", "[retrieval]\ntop_k = 0\n");
  CHECK_THROWS_AS(cli::load_config(tmp.path() / "bad2.ini"), cli::ConfigError);
  lt::write_file(tmp.path() / "bad3.ini", "[provider]\nkind = carrier-pigeon\n");
  CHECK_THROWS_AS(cli::load_config(tmp.path() / "bad3.ini"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(tmp.path() / "missing.ini"), cli::ConfigError);
}

TEST_CASE("ini parser essentials") {
  auto sections = cli::parse_ini("# top\n[a]\nx = 1\ny = two words \n[b]\nz=3\n");
  CHECK(sections["a"]["x"] == "1");
  CHECK(sections["a"]["y"] == "two words");
  CHECK(sections["b"]["z"] == "3");
  CHECK_THROWS_AS(cli::parse_ini("[broken\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_ini("[s]\nno-equals-here\n"), cli::ConfigError);
}

TEST_CASE("full command flow over the fixture corpus") {
  lt::TempDir tmp("flow");
  auto cfg = fixture_run_config(tmp);

  auto ingest = cli::cmd_ingest(cfg);
  CHECK(ingest.documents == 6);
  CHECK(ingest.passages == 10);
  CHECK(ingest.failures == 0);

  // every output begins with a header object
  auto corpus_rows = read_jsonl(ingest.corpus_file);
  REQUIRE(corpus_rows.size() == 11);
  CHECK(corpus_rows[0].at("type") == "header");
  CHECK(corpus_rows[0].at("tool") == "listqa");
  CHECK(corpus_rows[0].at("config_digest") == cfg.config_digest);
  CHECK(corpus_rows[0].at("seed") == 42);

  auto synth = cli::cmd_synthesize(cfg);
  CHECK(synth.report.kept == 3);
  auto dataset_rows = read_jsonl(synth.dataset_file);
  CHECK(dataset_rows.size() == 1 + 3);
  auto rejected_rows = read_jsonl(synth.rejected_file);
  CHECK(rejected_rows.size() == 1 + 1);

  auto index = cli::cmd_index(cfg);
  CHECK(index.passages == 10);

  auto answers = cli::cmd_answer_batch(cfg, synth.dataset_file, "");
  CHECK(answers.failures == 0);
  CHECK(answers.answered == 3);
  auto answer_rows = read_jsonl(answers.answers_file);
  REQUIRE(answer_rows.size() == 4);
  for (std::size_t i = 1; i < answer_rows.size(); ++i) {
    CHECK(answer_rows[i].at("isl_ok") == true);
    CHECK(answer_rows[i].at("routing") == "answerable");
    CHECK(answer_rows[i].at("retrieved").size() <= 3);
  }

  auto eval = cli::cmd_evaluate(cfg, synth.dataset_file, answers.answers_file);
  CHECK(eval.evaluated == 3);
  CHECK(eval.failures == 0);
  CHECK(eval.report.overall.records == 3);
  CHECK(eval.report.overall.rouge.count == 3);
  // the scripted eval judge marks the pension answer incomplete
  CHECK(eval.report.overall.completeness.mean_pct < 100.0);
  auto verdict_rows = read_jsonl(eval.verdicts_file);
  CHECK(verdict_rows.size() == 1 + 3);

  json report = json::parse(lt::read_file(eval.report_file));
  CHECK(report.contains("overall"));
  CHECK(report.contains("by_list_type"));
  CHECK(report.contains("by_domain"));
  CHECK(report.at("header").at("tool") == "listqa");
}

TEST_CASE("evaluating a one-record answers file yields one verdict") {
  lt::TempDir tmp("one");
  auto cfg = fixture_run_config(tmp);
  cli::cmd_ingest(cfg);
  auto synth = cli::cmd_synthesize(cfg);
  cli::cmd_index(cfg);
  auto batch = cli::cmd_answer_batch(cfg, synth.dataset_file, "");
  REQUIRE(batch.answered >= 1);

  // keep the header plus the first answer row only
  auto rows = read_jsonl(batch.answers_file);
  std::ofstream out(tmp.path() / "one_answer.jsonl");
  out << rows[0].dump() << '\n' << rows[1].dump() << '\n';
  out.close();

  auto eval = cli::cmd_evaluate(cfg, synth.dataset_file, tmp.path() / "one_answer.jsonl");
  CHECK(eval.evaluated == 1);
  CHECK(read_jsonl(eval.verdicts_file).size() == 2);  // header + one verdict
  CHECK(eval.report.overall.records == 1);
}

TEST_CASE("single-question answering routes unanswerable questions") {
  lt::TempDir tmp("route");
  auto cfg = fixture_run_config(tmp);
  cli::cmd_ingest(cfg);
  cli::cmd_index(cfg);

  auto row = cli::cmd_answer(cfg, {"zeppelin cargo tariffs", "isl", 0});
  CHECK(row.at("routing") == "unanswerable");
  CHECK(row.at("relevant_passage").is_null());
  auto parsed = isl::parse_isl(row.at("isl_text").get<std::string>());
  CHECK_FALSE(parsed.block.relevant_passage.has_value());
  CHECK(row.at("response").get<std::string>().find("could not find") != std::string::npos);

  auto grounded =
      cli::cmd_answer(cfg, {"Given my circumstances, can I get the childcare support grant?",
                            "isl", 0});
  CHECK(grounded.at("routing") == "answerable");
  CHECK(grounded.at("isl_ok") == true);
  CHECK(grounded.at("list_type") == "condition");
  CHECK(grounded.at("consistency_findings").empty());
  CHECK(grounded.at("deduced_answer") == "yes");

  CHECK_THROWS_AS(cli::cmd_answer(cfg, {"   ", "isl", 0}), cli::ConfigError);
}

TEST_CASE("direct mode returns plain responses") {
  lt::TempDir tmp("direct");
  auto cfg = fixture_run_config(tmp);
  cli::cmd_ingest(cfg);
  cli::cmd_index(cfg);
  // The scripted reply is an ISL block; direct mode passes text through.
  auto row = cli::cmd_answer(cfg, {"Given my circumstances, can I get the childcare support grant?",
                                   "direct", 0});
  CHECK(row.at("mode") == "direct");
  CHECK_FALSE(row.contains("isl_ok"));
  CHECK_FALSE(row.at("response").get<std::string>().empty());
}

TEST_CASE("answering over the three-fragment corpus parses a full condition block") {
  lt::TempDir tmp("trio");
  // Mock reply: the canonical condition block from the versioned fixtures.
  json script{{"rules",
               json::array({{{"tag", "answer"},
                             {"contains", "social work bursary?"},
                             {"response", rtrim(lt::read_file(lt::fixtures_dir() / "isl" / "v1" /
                                                              "condition.txt"))}}})}};
  lt::write_file(tmp.path() / "script.json", script.dump());
  std::string ini =
      "[corpus]\nmanifest = " +
      (lt::fixtures_dir() / "corpus" / "answer_manifest.txt").string() +
      "\n[provider]\nkind = mock\nmock_script = " + (tmp.path() / "script.json").string() +
      "\nmodel = scripted\n[paths]\nprompt_dir = " + lt::prompts_dir().string() +
      "\nout_dir = " + (tmp.path() / "out").string() + "\n";
  lt::write_file(tmp.path() / "run.ini", ini);
  auto cfg = cli::load_config(tmp.path() / "run.ini");
  cli::cmd_ingest(cfg);
  cli::cmd_index(cfg);

  auto row = cli::cmd_answer(
      cfg, {"I hold a higher education social work qualification. Am I eligible for a social "
            "work bursary?",
            "isl", 0});
  CHECK(row.at("routing") == "answerable");
  CHECK(row.at("retrieved").size() == 3);
  REQUIRE(row.at("isl_ok") == true);
  CHECK(row.at("relevant_passage") == 2);
  CHECK(row.at("list_type") == "condition");
  // the block's statuses deduce "no", matching the response opening
  CHECK(row.at("deduced_answer") == "no");
  CHECK(row.at("response").get<std::string>().rfind("No, you are not eligible", 0) == 0);
  // the block references prompt line ids outside passage 2's items, which the
  // consistency check surfaces as findings (the polarity itself is coherent)
  for (const auto& finding : row.at("consistency_findings"))
    CHECK(finding.get<std::string>().find("not a list item") != std::string::npos);
}

TEST_CASE("few-shot answering prepends exemplars without breaking the flow") {
  lt::TempDir tmp("shots");
  auto cfg = fixture_run_config(tmp);
  cli::cmd_ingest(cfg);
  auto synth = cli::cmd_synthesize(cfg);
  cli::cmd_index(cfg);
  cfg.shots = 4;
  auto batch = cli::cmd_answer_batch(cfg, synth.dataset_file, "");
  CHECK(batch.failures == 0);
  CHECK(batch.answered == 3);
}

TEST_CASE("missing artifacts are reported as such") {
  lt::TempDir tmp("missing");
  auto cfg = fixture_run_config(tmp);
  CHECK_THROWS(cli::cmd_synthesize(cfg));
  CHECK_THROWS(cli::cmd_answer(cfg, {"q", "isl", 0}));
}

TEST_CASE("the installed binary wires the subcommands") {
  lt::TempDir tmp("bin");
  auto config_path = tmp.path() / "run.ini";
  lt::write_file(config_path, fixture_config(tmp.path() / "out"));
  std::string binary = LISTQA_CLI_BIN;
  auto run = [&](const std::string& args) {
    std::string cmd = binary + " " + args + " >" + (tmp.path() / "stdout.txt").string() + " 2>" +
                      (tmp.path() / "stderr.txt").string();
    return std::system(cmd.c_str());
  };
  CHECK(run("ingest --config " + config_path.string()) == 0);
  CHECK(run("synthesize --config " + config_path.string()) == 0);
  CHECK(run("index --config " + config_path.string()) == 0);
  CHECK(run("answer --config " + config_path.string()) == 0);
  CHECK(run("evaluate --config " + config_path.string()) == 0);
  std::string table = lt::read_file(tmp.path() / "stdout.txt");
  CHECK(table.find("ROUGE-L") != std::string::npos);
  CHECK(table.find("Average") != std::string::npos);
  CHECK(run("--version") == 0);
  CHECK(run("answer --config " + config_path.string() + " --question nonsense") == 0);
  // a bad config is a fatal error with a nonzero exit
  CHECK(run("ingest --config " + (tmp.path() / "nope.ini").string()) != 0);
}
