#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "listqa/corpus/types.hpp"

namespace listqa::corpus {

// One manifest row: where to find a document and how to identify it.
struct ManifestEntry {
  std::filesystem::path path;
  std::string doc_id;
  std::string source_name;
};

struct ManifestError : std::runtime_error {
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

// Plain-text manifest, one `path doc_id source_name` triple per line
// (whitespace separated; '#' starts a comment).
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

// Canonical corpus row. Field set is fixed:
// {doc_id, source_name, passage_id, title, lines:[{id,text,is_list_item}],
//  list_blocks:[{lead_in, items:[ids]}]}.
nlohmann::json passage_to_json(const Document& doc, const Passage& passage);
Passage passage_from_json(const nlohmann::json& row, std::string* doc_id = nullptr,
                          std::string* source_name = nullptr);

// Reads a corpus file (JSONL; an optional leading header object is skipped)
// and regroups rows into documents in file order.
std::vector<Document> read_corpus_file(const std::filesystem::path& path);

}  // namespace listqa::corpus
