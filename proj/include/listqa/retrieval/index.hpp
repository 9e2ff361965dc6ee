#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "listqa/corpus/types.hpp"
#include "listqa/gateway/gateway.hpp"

namespace listqa::retrieval {

enum class Backend { kLexical, kEmbedding };

struct DuplicateId : std::runtime_error {
  explicit DuplicateId(const std::string& id)
      : std::runtime_error("duplicate passage id in index: " + id) {}
};

struct EmptyQuery : std::runtime_error {
  EmptyQuery() : std::runtime_error("retrieve: query has no tokens") {}
};

struct UnknownGoldId : std::runtime_error {
  explicit UnknownGoldId(const std::string& id)
      : std::runtime_error("recall_at_k: gold passage id not in index: " + id) {}
};

struct ScoredPassage {
  std::string passage_id;
  double score = 0.0;
};

// Top-k retrieval outcome: scores non-increasing, ties broken by ascending
// passage id, never more than k entries.
struct RetrievalResult {
  std::vector<ScoredPassage> ranked;
  int k = 0;
};

enum class Routing { kAnswerable, kUnanswerable };

// Exact-search passage index. The lexical backend scores with BM25
// (k1 = 1.2, b = 0.75, idf = ln(1 + (N - df + 0.5)/(df + 0.5)), always >= 0);
// the embedding backend scores with cosine similarity over gateway embeddings.
class PassageIndex {
 public:
  struct Entry {
    std::string passage_id;
    std::string text;
    std::vector<double> vector;  // embedding backend only
  };

  Backend backend() const { return backend_; }
  int dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  void save(const std::filesystem::path& path) const;
  static PassageIndex load(const std::filesystem::path& path);

  friend PassageIndex build_index(const std::vector<corpus::Passage>& passages, Backend backend,
                                  gateway::Gateway* gw);
  friend RetrievalResult retrieve(const PassageIndex& index, const std::string& query, int k,
                                  gateway::Gateway* gw, std::optional<double> score_floor);

 private:
  void rebuild_lexical_stats();

  Backend backend_ = Backend::kLexical;
  int dimension_ = 0;
  std::vector<Entry> entries_;

  // Lexical term statistics, derived from entry texts.
  std::unordered_map<std::string, int> doc_freq_;
  std::vector<std::unordered_map<std::string, int>> term_freq_;
  std::vector<int> doc_len_;
  double avg_doc_len_ = 0.0;
};

// Indexable text of a passage: title plus body lines.
std::string passage_index_text(const corpus::Passage& passage);

// The embedding backend requires a gateway; the lexical backend ignores it.
PassageIndex build_index(const std::vector<corpus::Passage>& passages, Backend backend,
                         gateway::Gateway* gw = nullptr);

RetrievalResult retrieve(const PassageIndex& index, const std::string& query, int k,
                         gateway::Gateway* gw = nullptr,
                         std::optional<double> score_floor = std::nullopt);

// Fraction of queries whose gold passage appears in the top k.
double recall_at_k(const PassageIndex& index,
                   const std::vector<std::pair<std::string, std::string>>& queries, int k,
                   gateway::Gateway* gw = nullptr);

// Unanswerable when fewer than min_hits passages came back.
Routing route(const RetrievalResult& result, int min_hits = 1);

}  // namespace listqa::retrieval
