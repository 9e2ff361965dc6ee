#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace listqa::evalkit {

struct LengthMismatch : std::runtime_error {
  LengthMismatch() : std::runtime_error("cohens_kappa: label vectors differ in length or are empty") {}
};

struct EmptyText : std::runtime_error {
  EmptyText() : std::runtime_error("mtld: text has no tokens") {}
};

// ROUGE-L F1 between candidate and reference. Tokens are lowercased
// alphanumeric runs; L is the longest-common-subsequence length;
// P = L/|candidate|, R = L/|reference|, F1 = 2PR/(P+R). Returns 0 when either
// side is empty or nothing overlaps.
double rouge_l(std::string_view candidate, std::string_view reference);

// Same metric over pre-tokenized sequences.
double rouge_l_tokens(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference);

// Cohen's kappa over two binary label vectors:
// kappa = (p_o - p_e) / (1 - p_e). The degenerate case where both raters use a
// single identical category (p_e = 1) scores 1.0.
double cohens_kappa(const std::vector<bool>& labels_a, const std::vector<bool>& labels_b);

// Measure of Textual Lexical Diversity (threshold 0.72, bidirectional mean).
// A factor completes whenever the running type-token ratio drops below the
// threshold; the tail contributes (1 - TTR) / (1 - threshold) of a factor.
// A pass that never accumulates any factor counts as one minimal partial
// factor so the estimate stays finite.
double mtld(std::string_view text);

// The forward and reversed passes behind mtld, for diagnostics.
std::pair<double, double> mtld_directional(std::string_view text);

}  // namespace listqa::evalkit
