#ifndef SYNDEC_BLEU_HPP
#define SYNDEC_BLEU_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace syndec {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kBleuOrder = 4;

// Clipped n-gram statistics of one hypothesis/reference pair. Integer counts,
// so corpus aggregates are exact and order-independent.
struct SentenceStats {
  std::array<long long, kBleuOrder> matched{};  // clipped matches, n = index + 1
  std::array<long long, kBleuOrder> total{};    // hypothesis n-gram counts
  long long hyp_len = 0;
  long long ref_len = 0;
};

SentenceStats sentence_stats(const std::vector<std::string>& hyp_tokens,
                             const std::vector<std::string>& ref_tokens);

struct EvalReport {
  double bleu = 0.0;  // 0..100; 0 whenever any order has no match (no smoothing)
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 0.0;
  long long hyp_len = 0;
  long long ref_len = 0;
  std::vector<SentenceStats> sentences;
};

// Corpus-level BLEU-4 over whitespace-tokenized lines, one sentence per line.
EvalReport bleu(const std::vector<std::string>& hyp_lines,
                const std::vector<std::string>& ref_lines);

// Corpus score of a resampled sentence multiset (indices into `sentences`).
double bleu_from_stats(const std::vector<SentenceStats>& sentences,
                       const std::vector<std::size_t>& indices);

struct BootstrapResult {
  double p_value = 1.0;  // fraction of resamples where system B fails to outscore A
  double bleu_a = 0.0;   // full-corpus scores
  double bleu_b = 0.0;
  int wins_a = 0;  // resamples where A scored strictly higher
  int wins_b = 0;
  int ties = 0;
  int samples = 0;
};

// Paired bootstrap over sentence indices drawn with replacement. Small p means
// system B is significantly better than system A.
BootstrapResult paired_bootstrap(const std::vector<std::string>& hyp_a,
                                 const std::vector<std::string>& hyp_b,
                                 const std::vector<std::string>& ref_lines, int samples = 1000,
                                 std::uint64_t seed = 1);

}  // namespace syndec

#endif  // SYNDEC_BLEU_HPP
