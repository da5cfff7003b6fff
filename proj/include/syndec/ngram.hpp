#ifndef SYNDEC_NGRAM_HPP
#define SYNDEC_NGRAM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "syndec/scorer.hpp"
#include "syndec/vocab.hpp"

namespace syndec {

// Add-k n-gram model. An n-gram (context, target) is counted for every
// context length 0..order-1; at query time the longest context with a
// nonzero observed total is used:
//   P(w | ctx) = (count(ctx, w) + k) / (total(ctx) + k * V)
class NgramModel final : public SequenceScorer {
 public:
  NgramModel(Vocabulary vocab, int order, double k);

  const Vocabulary& vocab() const override { return vocab_; }
  int order() const { return order_; }
  double k() const { return k_; }

  ScorerState start() const override;
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override;

  // Counts one sequence (targets are the tokens plus </s>, with <s> padding
  // as left context).
  void count_sequence(const std::vector<TokenId>& tokens);

  void save(const std::string& path) const;
  static NgramModel load(const std::string& path);

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::map<TokenId, std::uint64_t> by_token;
  };

  const ContextCounts* find_context(const std::vector<TokenId>& ctx) const;

  Vocabulary vocab_;
  int order_;
  double k_;
  std::map<std::vector<TokenId>, ContextCounts> counts_;
};

NgramModel train_ngram(const std::vector<std::vector<TokenId>>& corpus, Vocabulary vocab,
                       int order, double k);

}  // namespace syndec

#endif  // SYNDEC_NGRAM_HPP
