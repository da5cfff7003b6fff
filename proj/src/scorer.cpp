#include "syndec/scorer.hpp"

#include <cmath>
#include <limits>

namespace syndec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class T>
const T& cast_state(const ScorerState& state) {
  const T* typed = dynamic_cast<const T*>(state.get());
  if (!typed) throw ScorerError("scorer state of unexpected type");
  return *typed;
}

}  // namespace

double prefix_log_prob(const SequenceScorer& scorer, std::span<const TokenId> tokens) {
  double total = 0.0;
  ScorerState state = scorer.start();
  for (TokenId tok : tokens) {
    total += scorer.next_log_probs(state)[static_cast<std::size_t>(tok)];
    state = scorer.advance(state, tok);
  }
  return total;
}

double sequence_log_prob(const SequenceScorer& scorer, std::span<const TokenId> tokens) {
  double total = 0.0;
  ScorerState state = scorer.start();
  for (TokenId tok : tokens) {
    total += scorer.next_log_probs(state)[static_cast<std::size_t>(tok)];
    state = scorer.advance(state, tok);
  }
  total += scorer.next_log_probs(state)[static_cast<std::size_t>(Vocabulary::kEosId)];
  return total;
}

// ---------------------------------------------------------------- uniform

namespace {
struct EmptyState final : ScorerStateBase {};
}  // namespace

UniformScorer::UniformScorer(Vocabulary vocab)
    : vocab_(std::move(vocab)), log_prob_(-std::log(static_cast<double>(vocab_.size()))) {}

ScorerState UniformScorer::start() const { return std::make_shared<EmptyState>(); }

std::vector<double> UniformScorer::next_log_probs(const ScorerState&) const {
  return std::vector<double>(vocab_.size(), log_prob_);
}

ScorerState UniformScorer::advance(const ScorerState& state, TokenId) const { return state; }

// ---------------------------------------------------------------- fixed

namespace {
struct FixedState final : ScorerStateBase {
  std::size_t pos;
  explicit FixedState(std::size_t p) : pos(p) {}
};
}  // namespace

FixedSequenceScorer::FixedSequenceScorer(Vocabulary vocab, std::vector<TokenId> sequence)
    : vocab_(std::move(vocab)), seq_(std::move(sequence)) {
  for (TokenId tok : seq_) {
    if (tok < 0 || static_cast<std::size_t>(tok) >= vocab_.size())
      throw ScorerError("fixed sequence token out of vocabulary");
  }
  if (seq_.empty() || seq_.back() != Vocabulary::kEosId) seq_.push_back(Vocabulary::kEosId);
}

ScorerState FixedSequenceScorer::start() const { return std::make_shared<FixedState>(0); }

std::vector<double> FixedSequenceScorer::next_log_probs(const ScorerState& state) const {
  const auto& fs = cast_state<FixedState>(state);
  std::vector<double> lp(vocab_.size(), kNegInf);
  if (fs.pos < seq_.size()) lp[static_cast<std::size_t>(seq_[fs.pos])] = 0.0;
  return lp;
}

ScorerState FixedSequenceScorer::advance(const ScorerState& state, TokenId token) const {
  const auto& fs = cast_state<FixedState>(state);
  if (fs.pos < seq_.size() && token == seq_[fs.pos])
    return std::make_shared<FixedState>(fs.pos + 1);
  return std::make_shared<FixedState>(seq_.size() + 1);  // dead: everything scores -inf
}

// ---------------------------------------------------------------- penalty

NonterminalPenaltyScorer::NonterminalPenaltyScorer(const SequenceScorer& base, double gamma,
                                                   const SymbolClassifier& classifier)
    : base_(&base), gamma_(gamma), penalized_(base.vocab().size(), false) {
  if (gamma > 0.0) throw ScorerError("non-terminal penalty must be <= 0");
  const Vocabulary& v = base.vocab();
  for (std::size_t id = 0; id < v.size(); ++id) {
    SymbolClass cls = classifier.classify(v.token(static_cast<TokenId>(id)));
    if (cls == SymbolClass::Nonterminal || cls == SymbolClass::RuleEndNonterminal)
      penalized_[id] = true;
  }
}

std::vector<double> NonterminalPenaltyScorer::next_log_probs(const ScorerState& state) const {
  std::vector<double> lp = base_->next_log_probs(state);
  for (std::size_t id = 0; id < lp.size(); ++id)
    if (penalized_[id]) lp[id] += gamma_;
  return lp;
}

NonterminalPenaltyScorer with_nonterminal_penalty(const SequenceScorer& base, double gamma,
                                                  const SymbolClassifier& classifier) {
  return NonterminalPenaltyScorer(base, gamma, classifier);
}

// ---------------------------------------------------------------- ensemble

namespace {
struct EnsembleState final : ScorerStateBase {
  std::vector<ScorerState> parts;
};
}  // namespace

LogLinearEnsemble::LogLinearEnsemble(std::vector<const SequenceScorer*> members,
                                     std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw ScorerError("ensemble needs at least one member");
  if (weights_.empty()) weights_.assign(members_.size(), 1.0);
  if (weights_.size() != members_.size())
    throw ScorerError("ensemble weight count does not match member count");
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ScorerError("ensemble weights must be finite and >= 0");
  for (const SequenceScorer* m : members_)
    if (!(m->vocab() == members_.front()->vocab()))
      throw ScorerError("ensemble members must share one vocabulary");
}

ScorerState LogLinearEnsemble::start() const {
  auto state = std::make_shared<EnsembleState>();
  state->parts.reserve(members_.size());
  for (const SequenceScorer* m : members_) state->parts.push_back(m->start());
  return state;
}

std::vector<double> LogLinearEnsemble::next_log_probs(const ScorerState& state) const {
  const auto& es = cast_state<EnsembleState>(state);
  std::vector<double> total(vocab().size(), 0.0);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    if (weights_[m] == 0.0) continue;
    std::vector<double> lp = members_[m]->next_log_probs(es.parts[m]);
    for (std::size_t id = 0; id < total.size(); ++id) total[id] += weights_[m] * lp[id];
  }
  return total;
}

ScorerState LogLinearEnsemble::advance(const ScorerState& state, TokenId token) const {
  const auto& es = cast_state<EnsembleState>(state);
  auto next = std::make_shared<EnsembleState>();
  next->parts.reserve(members_.size());
  for (std::size_t m = 0; m < members_.size(); ++m)
    next->parts.push_back(members_[m]->advance(es.parts[m], token));
  return next;
}

LogLinearEnsemble log_linear_ensemble(std::vector<const SequenceScorer*> members,
                                      std::vector<double> weights) {
  return LogLinearEnsemble(std::move(members), std::move(weights));
}

}  // namespace syndec
