#include "listqa/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "listqa/util/text.hpp"

namespace listqa::cli {

std::map<std::string, std::map<std::string, std::string>> parse_ini(const std::string& content) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::istringstream in(content);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return sections;
}

namespace {

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string::npos) comma = value.size();
    std::string item = trim(value.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": " + v);
  }
}

int to_int(const std::string& v, const std::string& key) {
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": " + v);
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  std::string t = to_lower(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("bad boolean value for " + key + ": " + v);
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();

  auto sections = parse_ini(content);
  RunConfig cfg;
  cfg.config_path = path;
  cfg.config_digest = to_hex(fnv1a64(content));

  auto base = path.parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_relative() ? base / fp : fp;
  };

  for (const auto& [section, kv] : sections) {
    for (const auto& [key, value] : kv) {
      std::string where = "[" + section + "] " + key;
      if (section == "corpus") {
        if (key == "manifest") cfg.manifest = resolve(value);
        else throw ConfigError("unknown key " + where);
      } else if (section == "paths") {
        if (key == "prompt_dir") cfg.prompt_dir = resolve(value);
        else if (key == "out_dir") cfg.out_dir = resolve(value);
        else if (key == "replay") cfg.replay_session = resolve(value);
        else throw ConfigError("unknown key " + where);
      } else if (section == "provider") {
        if (key == "kind") cfg.provider_kind = value;
        else if (key == "mock_script") cfg.mock_script = resolve(value);
        else if (key == "base_url") cfg.provider.base_url = value;
        else if (key == "api_key_env_var") cfg.provider.api_key_env_var = value;
        else if (key == "model") cfg.provider.model = value;
        else if (key == "embed_model") cfg.provider.embed_model = value;
        else if (key == "max_concurrent") cfg.provider.max_concurrent = to_int(value, where);
        else if (key == "max_retries") cfg.provider.max_retries = to_int(value, where);
        else if (key == "backoff_base_ms") cfg.provider.backoff_base_ms = to_int(value, where);
        else if (key == "timeout_s") cfg.provider.timeout_s = to_int(value, where);
        else throw ConfigError("unknown key " + where);
      } else if (section == "pipeline") {
        if (key == "seed") cfg.pipeline.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (key == "filtering") cfg.pipeline.filtering = to_bool(value, where);
        else if (key == "unseen_sources") cfg.pipeline.unseen_sources = split_csv(value);
        else if (key == "generation_temperature")
          cfg.pipeline.generation_temperature = to_double(value, where);
        else throw ConfigError("unknown key " + where);
      } else if (section == "splits") {
        if (key == "train") cfg.pipeline.train_ratio = to_double(value, where);
        else if (key == "dev") cfg.pipeline.dev_ratio = to_double(value, where);
        else if (key == "test") cfg.pipeline.test_ratio = to_double(value, where);
        else throw ConfigError("unknown key " + where);
      } else if (section == "fewshot") {
        if (key == "bank") cfg.fewshot_bank = resolve(value);
        else throw ConfigError("unknown key " + where);
      } else if (section == "retrieval") {
        if (key == "backend") cfg.retrieval_backend = value;
        else if (key == "top_k") cfg.top_k = to_int(value, where);
        else if (key == "score_floor") cfg.score_floor = to_double(value, where);
        else if (key == "index_all_passages") cfg.index_all_passages = to_bool(value, where);
        else throw ConfigError("unknown key " + where);
      } else if (section == "answer") {
        if (key == "mode") cfg.answer_mode = value;
        else if (key == "shots") cfg.shots = to_int(value, where);
        else if (key == "max_tokens") cfg.answer_max_tokens = to_int(value, where);
        else throw ConfigError("unknown key " + where);
      } else {
        throw ConfigError("unknown section [" + section + "]");
      }
    }
  }

  if (cfg.top_k < 1) throw ConfigError("top_k must be >= 1");
  if (cfg.provider_kind != "mock" && cfg.provider_kind != "http")
    throw ConfigError("provider kind must be 'mock' or 'http'");
  if (cfg.retrieval_backend != "lexical" && cfg.retrieval_backend != "embedding")
    throw ConfigError("retrieval backend must be 'lexical' or 'embedding'");
  if (cfg.answer_mode != "isl" && cfg.answer_mode != "direct")
    throw ConfigError("answer mode must be 'isl' or 'direct'");
  cfg.pipeline.model = cfg.provider.model;
  if (cfg.fewshot_bank.empty()) cfg.fewshot_bank = cfg.prompt_dir / "fewshot_bank.json";
  return cfg;
}

}  // namespace listqa::cli
