#include "listqa/evalkit/metrics.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "listqa/util/text.hpp"

namespace listqa::evalkit {

double rouge_l_tokens(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference) {
  const std::size_t m = candidate.size();
  const std::size_t n = reference.size();
  if (m == 0 || n == 0) return 0.0;

  // Two-row LCS table.
  std::vector<std::size_t> prev(n + 1, 0);
  std::vector<std::size_t> cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const auto lcs = static_cast<double>(prev[n]);
  if (lcs == 0.0) return 0.0;
  double precision = lcs / static_cast<double>(m);
  double recall = lcs / static_cast<double>(n);
  return 2.0 * precision * recall / (precision + recall);
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l_tokens(tokenize_alnum(candidate), tokenize_alnum(reference));
}

double cohens_kappa(const std::vector<bool>& labels_a, const std::vector<bool>& labels_b) {
  if (labels_a.empty() || labels_a.size() != labels_b.size()) throw LengthMismatch();
  const auto n = static_cast<double>(labels_a.size());
  double agree = 0;
  double a_pos = 0;
  double b_pos = 0;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    if (labels_a[i] == labels_b[i]) agree += 1;
    if (labels_a[i]) a_pos += 1;
    if (labels_b[i]) b_pos += 1;
  }
  double p_o = agree / n;
  double p_e = (a_pos * b_pos + (n - a_pos) * (n - b_pos)) / (n * n);
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

namespace {

constexpr double kTtrThreshold = 0.72;

// One directional MTLD pass.
double mtld_pass(const std::vector<std::string>& tokens) {
  double factors = 0.0;
  std::unordered_set<std::string> types;
  std::size_t factor_tokens = 0;
  double ttr = 1.0;
  for (const auto& tok : tokens) {
    ++factor_tokens;
    types.insert(tok);
    ttr = static_cast<double>(types.size()) / static_cast<double>(factor_tokens);
    if (ttr < kTtrThreshold) {
      factors += 1.0;
      types.clear();
      factor_tokens = 0;
      ttr = 1.0;
    }
  }
  if (factor_tokens > 0) factors += (1.0 - ttr) / (1.0 - kTtrThreshold);
  if (factors <= 0.0) {
    // All tokens distinct: no factor ever accumulated. Count the pass as one
    // minimal partial factor to keep the measure finite.
    factors = 1.0 - kTtrThreshold;
  }
  return static_cast<double>(tokens.size()) / factors;
}

}  // namespace

std::pair<double, double> mtld_directional(std::string_view text) {
  std::vector<std::string> tokens = tokenize_alnum(text);
  if (tokens.empty()) throw EmptyText();
  double forward = mtld_pass(tokens);
  std::reverse(tokens.begin(), tokens.end());
  double backward = mtld_pass(tokens);
  return {forward, backward};
}

double mtld(std::string_view text) {
  auto [forward, backward] = mtld_directional(text);
  return (forward + backward) / 2.0;
}

}  // namespace listqa::evalkit
