#include "listqa/retrieval/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "listqa/util/text.hpp"

namespace listqa::retrieval {

using nlohmann::json;

namespace {
constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;
}  // namespace

std::string passage_index_text(const corpus::Passage& passage) {
  std::string text = passage.title;
  for (const auto& line : passage.lines) {
    if (!text.empty()) text += '\n';
    text += line.text;
  }
  return text;
}

void PassageIndex::rebuild_lexical_stats() {
  doc_freq_.clear();
  term_freq_.assign(entries_.size(), {});
  doc_len_.assign(entries_.size(), 0);
  long total_len = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto tokens = tokenize_alnum(entries_[i].text);
    doc_len_[i] = static_cast<int>(tokens.size());
    total_len += doc_len_[i];
    for (const auto& t : tokens) ++term_freq_[i][t];
    for (const auto& [term, tf] : term_freq_[i]) ++doc_freq_[term];
  }
  avg_doc_len_ = entries_.empty() ? 0.0 : static_cast<double>(total_len) / entries_.size();
}

PassageIndex build_index(const std::vector<corpus::Passage>& passages, Backend backend,
                         gateway::Gateway* gw) {
  if (passages.empty()) throw std::invalid_argument("build_index: no passages");
  PassageIndex index;
  index.backend_ = backend;
  std::set<std::string> seen;
  for (const auto& p : passages) {
    if (!seen.insert(p.passage_id).second) throw DuplicateId(p.passage_id);
    index.entries_.push_back({p.passage_id, passage_index_text(p), {}});
  }
  if (backend == Backend::kEmbedding) {
    if (gw == nullptr)
      throw std::invalid_argument("embedding backend requires a gateway");
    std::vector<std::string> texts;
    texts.reserve(index.entries_.size());
    for (const auto& e : index.entries_) texts.push_back(e.text);
    auto vectors = gw->embed(texts);
    for (std::size_t i = 0; i < vectors.size(); ++i)
      index.entries_[i].vector = std::move(vectors[i]);
    index.dimension_ = static_cast<int>(index.entries_.front().vector.size());
  } else {
    index.rebuild_lexical_stats();
  }
  return index;
}

RetrievalResult retrieve(const PassageIndex& index, const std::string& query, int k,
                         gateway::Gateway* gw, std::optional<double> score_floor) {
  if (k < 1) throw std::invalid_argument("retrieve: k must be >= 1");
  std::vector<ScoredPassage> scored;

  if (index.backend_ == Backend::kLexical) {
    auto query_tokens = tokenize_alnum(query);
    if (query_tokens.empty()) throw EmptyQuery();
    const double n_docs = static_cast<double>(index.entries_.size());
    for (std::size_t i = 0; i < index.entries_.size(); ++i) {
      double score = 0.0;
      const auto& tf_map = index.term_freq_[i];
      const double len_norm =
          kBm25K1 * (1.0 - kBm25B + kBm25B * index.doc_len_[i] / index.avg_doc_len_);
      for (const auto& token : query_tokens) {
        auto tf_it = tf_map.find(token);
        if (tf_it == tf_map.end()) continue;
        double df = static_cast<double>(index.doc_freq_.at(token));
        double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        double tf = static_cast<double>(tf_it->second);
        score += idf * tf * (kBm25K1 + 1.0) / (tf + len_norm);
      }
      if (score > 0.0) scored.push_back({index.entries_[i].passage_id, score});
    }
  } else {
    if (gw == nullptr) throw std::invalid_argument("embedding retrieval requires a gateway");
    if (trim_view(query).empty()) throw EmptyQuery();
    auto query_vec = gw->embed({query}).front();
    if (static_cast<int>(query_vec.size()) != index.dimension_)
      throw gateway::DimensionMismatch("query embedding dimension differs from index");
    for (const auto& entry : index.entries_) {
      double dot = 0.0;
      for (std::size_t d = 0; d < query_vec.size(); ++d) dot += query_vec[d] * entry.vector[d];
      scored.push_back({entry.passage_id, dot});
    }
  }

  if (score_floor)
    scored.erase(std::remove_if(scored.begin(), scored.end(),
                                [&](const ScoredPassage& s) { return s.score < *score_floor; }),
                 scored.end());

  std::sort(scored.begin(), scored.end(), [](const ScoredPassage& a, const ScoredPassage& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.passage_id < b.passage_id;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
  return RetrievalResult{std::move(scored), k};
}

double recall_at_k(const PassageIndex& index,
                   const std::vector<std::pair<std::string, std::string>>& queries, int k,
                   gateway::Gateway* gw) {
  if (queries.empty()) throw std::invalid_argument("recall_at_k: no queries");
  std::set<std::string> known;
  for (const auto& e : index.entries()) known.insert(e.passage_id);
  int hits = 0;
  for (const auto& [question, gold_id] : queries) {
    if (known.find(gold_id) == known.end()) throw UnknownGoldId(gold_id);
    RetrievalResult result = retrieve(index, question, k, gw);
    for (const auto& s : result.ranked) {
      if (s.passage_id == gold_id) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

Routing route(const RetrievalResult& result, int min_hits) {
  return static_cast<int>(result.ranked.size()) < min_hits ? Routing::kUnanswerable
                                                           : Routing::kAnswerable;
}

void PassageIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write index file: " + path.string());
  out << json{{"backend", backend_ == Backend::kLexical ? "lexical" : "embedding"},
              {"dimension", dimension_},
              {"count", entries_.size()}}
             .dump()
      << '\n';
  for (const auto& e : entries_) {
    json row{{"passage_id", e.passage_id}, {"text", e.text}};
    if (backend_ == Backend::kEmbedding) row["vector"] = e.vector;
    out << row.dump() << '\n';
  }
}

PassageIndex PassageIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open index file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty index file: " + path.string());
  json header = json::parse(line);
  PassageIndex index;
  index.backend_ = header.at("backend") == "lexical" ? Backend::kLexical : Backend::kEmbedding;
  index.dimension_ = header.at("dimension").get<int>();
  auto count = header.at("count").get<std::size_t>();
  while (std::getline(in, line)) {
    if (trim_view(line).empty()) continue;
    json row = json::parse(line);
    Entry e;
    e.passage_id = row.at("passage_id").get<std::string>();
    e.text = row.at("text").get<std::string>();
    if (index.backend_ == Backend::kEmbedding)
      e.vector = row.at("vector").get<std::vector<double>>();
    index.entries_.push_back(std::move(e));
  }
  if (index.entries_.size() != count)
    throw std::runtime_error("index file entry count mismatch: " + path.string());
  if (index.backend_ == Backend::kLexical) index.rebuild_lexical_stats();
  return index;
}

}  // namespace listqa::retrieval
