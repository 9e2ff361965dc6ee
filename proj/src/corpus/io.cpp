#include "listqa/corpus/io.hpp"

#include <fstream>
#include <sstream>

#include "listqa/util/text.hpp"

namespace listqa::corpus {

using nlohmann::json;

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ManifestError("cannot open manifest: " + manifest_path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream row(t);
    ManifestEntry e;
    std::string path_str;
    if (!(row >> path_str >> e.doc_id >> e.source_name))
      throw ManifestError(manifest_path.string() + ":" + std::to_string(line_no) +
                          ": expected 'path doc_id source_name'");
    e.path = path_str;
    if (e.path.is_relative()) e.path = manifest_path.parent_path() / e.path;
    entries.push_back(std::move(e));
  }
  return entries;
}

json passage_to_json(const Document& doc, const Passage& passage) {
  json lines = json::array();
  for (const auto& l : passage.lines)
    lines.push_back({{"id", l.id}, {"text", l.text}, {"is_list_item", l.is_list_item}});
  json blocks = json::array();
  for (const auto& b : passage.list_blocks) {
    json block;
    block["lead_in"] = b.lead_in_line_id ? json(*b.lead_in_line_id) : json(nullptr);
    block["items"] = b.item_line_ids;
    blocks.push_back(std::move(block));
  }
  return json{{"doc_id", doc.doc_id},
              {"source_name", doc.source_name},
              {"passage_id", passage.passage_id},
              {"title", passage.title},
              {"lines", std::move(lines)},
              {"list_blocks", std::move(blocks)}};
}

Passage passage_from_json(const json& row, std::string* doc_id, std::string* source_name) {
  Passage p;
  p.passage_id = row.at("passage_id").get<std::string>();
  p.title = row.at("title").get<std::string>();
  for (const auto& l : row.at("lines"))
    p.lines.push_back(Line{l.at("id").get<int>(), l.at("text").get<std::string>(),
                           l.at("is_list_item").get<bool>()});
  for (const auto& b : row.at("list_blocks")) {
    ListBlock block;
    if (!b.at("lead_in").is_null()) block.lead_in_line_id = b.at("lead_in").get<int>();
    block.item_line_ids = b.at("items").get<std::vector<int>>();
    p.list_blocks.push_back(std::move(block));
  }
  if (doc_id != nullptr) *doc_id = row.at("doc_id").get<std::string>();
  if (source_name != nullptr) *source_name = row.at("source_name").get<std::string>();
  validate_passage(p);
  return p;
}

std::vector<Document> read_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    json row = json::parse(t);
    if (row.contains("type") && row["type"] == "header") continue;
    std::string doc_id;
    std::string source_name;
    Passage p = passage_from_json(row, &doc_id, &source_name);
    if (docs.empty() || docs.back().doc_id != doc_id)
      docs.push_back(Document{doc_id, source_name, {}});
    docs.back().passages.push_back(std::move(p));
  }
  return docs;
}

}  // namespace listqa::corpus
