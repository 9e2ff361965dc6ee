#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "listqa/listlogic/types.hpp"
#include "listqa/util/rng.hpp"

namespace listqa::testing {

inline std::filesystem::path fixtures_dir() { return std::filesystem::path(LISTQA_FIXTURES_DIR); }
inline std::filesystem::path prompts_dir() { return std::filesystem::path(LISTQA_PROMPTS_DIR); }

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& label) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("listqa-" + label + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << content;
}

// ---------------------------------------------------------------------------
// Independent three-valued oracle. Maps supported->true, contradicted->false,
// unknown->indeterminate and folds with Kleene conjunction/disjunction; kept
// free of any dependence on the deduction engine it checks.
// ---------------------------------------------------------------------------

enum class Tri { kFalse = 0, kIndet = 1, kTrue = 2 };

inline Tri tri_of(listlogic::UserItemStatus s) {
  switch (s) {
    case listlogic::UserItemStatus::kSupported: return Tri::kTrue;
    case listlogic::UserItemStatus::kContradicted: return Tri::kFalse;
    case listlogic::UserItemStatus::kUnknown: return Tri::kIndet;
  }
  return Tri::kIndet;
}

inline Tri tri_and(Tri a, Tri b) { return static_cast<Tri>(std::min(static_cast<int>(a), static_cast<int>(b))); }
inline Tri tri_or(Tri a, Tri b) { return static_cast<Tri>(std::max(static_cast<int>(a), static_cast<int>(b))); }

inline listlogic::ShortAnswer oracle_deduce(listlogic::LogicalRelation relation,
                                            const std::vector<listlogic::UserItemStatus>& statuses) {
  Tri acc = relation == listlogic::LogicalRelation::kAnd ? Tri::kTrue : Tri::kFalse;
  for (auto s : statuses)
    acc = relation == listlogic::LogicalRelation::kAnd ? tri_and(acc, tri_of(s))
                                                       : tri_or(acc, tri_of(s));
  switch (acc) {
    case Tri::kTrue: return listlogic::ShortAnswer::kYes;
    case Tri::kFalse: return listlogic::ShortAnswer::kNo;
    case Tri::kIndet: return listlogic::ShortAnswer::kUncertain;
  }
  return listlogic::ShortAnswer::kUncertain;
}

// ---------------------------------------------------------------------------
// Independent LCS oracle: memoized recursion, quadratic, no code shared with
// the metric implementation.
// ---------------------------------------------------------------------------

inline std::size_t lcs_rec(const std::vector<std::string>& a, const std::vector<std::string>& b,
                           std::size_t i, std::size_t j, std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo) {
  if (i == a.size() || j == b.size()) return 0;
  auto key = std::make_pair(i, j);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::size_t value;
  if (a[i] == b[j])
    value = 1 + lcs_rec(a, b, i + 1, j + 1, memo);
  else
    value = std::max(lcs_rec(a, b, i + 1, j, memo), lcs_rec(a, b, i, j + 1, memo));
  memo[key] = value;
  return value;
}

inline double oracle_rouge_l(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  double lcs = static_cast<double>(lcs_rec(candidate, reference, 0, 0, memo));
  if (lcs == 0.0) return 0.0;
  double p = lcs / candidate.size();
  double r = lcs / reference.size();
  return 2.0 * p * r / (p + r);
}

inline std::vector<listlogic::UserItemStatus> status_vector_from_code(std::size_t code, int n) {
  static constexpr listlogic::UserItemStatus kAll[] = {listlogic::UserItemStatus::kSupported,
                                                       listlogic::UserItemStatus::kContradicted,
                                                       listlogic::UserItemStatus::kUnknown};
  std::vector<listlogic::UserItemStatus> vec;
  for (int i = 0; i < n; ++i) {
    vec.push_back(kAll[code % 3]);
    code /= 3;
  }
  return vec;
}

}  // namespace listqa::testing
