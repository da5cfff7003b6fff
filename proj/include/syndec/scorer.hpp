#ifndef SYNDEC_SCORER_HPP
#define SYNDEC_SCORER_HPP

#include <memory>
#include <span>
#include <vector>

#include "syndec/symbols.hpp"
#include "syndec/vocab.hpp"

namespace syndec {

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScorerStateBase {
  virtual ~ScorerStateBase() = default;
};
using ScorerState = std::shared_ptr<const ScorerStateBase>;

// Stateful left-to-right model of P(token | prefix) over one representation's
// vocabulary. Backends emit a normalized distribution at every state (sums to
// 1 in probability space); wrappers such as the non-terminal penalty and the
// log-linear ensemble emit unnormalized scores meant only for ranking.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  virtual const Vocabulary& vocab() const = 0;
  virtual ScorerState start() const = 0;
  // Log scores over the full vocabulary, indexed by TokenId.
  virtual std::vector<double> next_log_probs(const ScorerState& state) const = 0;
  virtual ScorerState advance(const ScorerState& state, TokenId token) const = 0;
};

// Sum of stepwise log scores for the whole sequence followed by </s>.
double sequence_log_prob(const SequenceScorer& scorer, std::span<const TokenId> tokens);
// Sum of stepwise log scores for the prefix only (no </s>).
double prefix_log_prob(const SequenceScorer& scorer, std::span<const TokenId> tokens);

class UniformScorer final : public SequenceScorer {
 public:
  explicit UniformScorer(Vocabulary vocab);
  const Vocabulary& vocab() const override { return vocab_; }
  ScorerState start() const override;
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override;

 private:
  Vocabulary vocab_;
  double log_prob_;
};

// Deterministic scorer: probability 1 along one fixed sequence (plus </s>),
// probability 0 elsewhere. Used as a test and pipeline building block.
class FixedSequenceScorer final : public SequenceScorer {
 public:
  FixedSequenceScorer(Vocabulary vocab, std::vector<TokenId> sequence);
  const Vocabulary& vocab() const override { return vocab_; }
  ScorerState start() const override;
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override;

 private:
  Vocabulary vocab_;
  std::vector<TokenId> seq_;  // includes trailing </s>
};

// Adds gamma (<= 0) to the log score of every NONTERMINAL and
// RULE_END_NONTERMINAL token; terminal scores are untouched and no
// renormalization is applied.
class NonterminalPenaltyScorer final : public SequenceScorer {
 public:
  NonterminalPenaltyScorer(const SequenceScorer& base, double gamma,
                           const SymbolClassifier& classifier);
  const Vocabulary& vocab() const override { return base_->vocab(); }
  ScorerState start() const override { return base_->start(); }
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override {
    return base_->advance(state, token);
  }

 private:
  const SequenceScorer* base_;
  double gamma_;
  std::vector<bool> penalized_;  // by TokenId
};

NonterminalPenaltyScorer with_nonterminal_penalty(const SequenceScorer& base, double gamma,
                                                  const SymbolClassifier& classifier);

// Stepwise weighted sum of member log scores. Members must share one
// vocabulary; weights default to 1 each.
class LogLinearEnsemble final : public SequenceScorer {
 public:
  explicit LogLinearEnsemble(std::vector<const SequenceScorer*> members,
                             std::vector<double> weights = {});
  const Vocabulary& vocab() const override { return members_.front()->vocab(); }
  ScorerState start() const override;
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override;

 private:
  std::vector<const SequenceScorer*> members_;
  std::vector<double> weights_;
};

LogLinearEnsemble log_linear_ensemble(std::vector<const SequenceScorer*> members,
                                      std::vector<double> weights = {});

}  // namespace syndec

#endif  // SYNDEC_SCORER_HPP
