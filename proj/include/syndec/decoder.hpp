#ifndef SYNDEC_DECODER_HPP
#define SYNDEC_DECODER_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "syndec/scorer.hpp"
#include "syndec/symbols.hpp"
#include "syndec/transducer.hpp"
#include "syndec/tree.hpp"
#include "syndec/vocab.hpp"

namespace syndec {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ constraints

// Fine-grained token categories used by the well-formedness automata.
enum class MaskCategory {
  OpenBracket,
  CloseBracket,
  PlainNonterminal,
  RuleEndNonterminal,
  TerminalCont,
  TerminalFinal,
  Eos,
  Bos,
};
inline constexpr std::size_t kMaskCategories = 8;
using MaskSet = std::array<bool, kMaskCategories>;

MaskCategory mask_category(std::string_view token, const SymbolClassifier& classifier);

inline bool mask_allows(const MaskSet& mask, MaskCategory cat) {
  return mask[static_cast<std::size_t>(cat)];
}

// Incremental prefix automaton deciding which token categories may extend a
// syntax-representation prefix. Bracket balance and one-word-per-preterminal
// for linearized trees; the pending-non-terminal stack count for linearized
// derivations. Consuming a disallowed category sends the automaton to a dead
// state instead of throwing.
class WellformedMask {
 public:
  explicit WellformedMask(TokenKind kind);  // LinearTree or LinearDerivation

  MaskSet allowed() const;
  void consume(MaskCategory cat);
  bool dead() const { return dead_; }
  bool complete() const;

 private:
  struct Node {
    int children = 0;
    enum { Unknown, Internal, Terminal } kind = Unknown;
    bool word_open = false;
  };
  enum class DerivMode { Boundary, NtRun, TermRun };

  TokenKind kind_;
  bool dead_ = false;
  bool eos_seen_ = false;
  // linear tree state
  std::vector<Node> stack_;
  bool started_ = false;
  bool closed_ = false;
  // linear derivation state
  int pending_ = 1;
  DerivMode mode_ = DerivMode::Boundary;
  int run_nts_ = 0;
};

// Allowed categories after consuming `prefix` from scratch.
MaskSet wellformed_mask(TokenKind kind, const std::vector<std::string>& prefix,
                        const SymbolClassifier& classifier);

// ------------------------------------------------------------ decoding

struct DecodeConfig {
  int beam = 4;
  int inner_beam = 16;  // synchronized internal states kept per hypothesis and model
  int max_len = 128;    // emitted external tokens, </s> included
  int expansion_cap = 64;
  double nonterminal_gamma = 0.0;  // <= 0; applied to non-terminal token scores
  bool constrain_wellformed = false;
  std::vector<double> ensemble_weights;  // empty = 1.0 per model
  TokenKind kind = TokenKind::PlainText;  // representation being decoded
  SymbolClassifier classifier;            // drives the penalty and the constraint
  bool check_sync = false;  // assert internal prefixes project onto the external prefix
  std::ostream* trace = nullptr;  // one machine-readable line per step
};

struct DecodeResult {
  TokenSeq tokens;     // best external sequence, <s>/</s> excluded
  double score = 0.0;  // combined log score including </s>
  bool finished = true;
  std::vector<TokenSeq> internal;       // multi-representation: best internal per model
  std::vector<double> internal_scores;  // their cumulative internal log probabilities
  std::size_t pruned_dead_lanes = 0;    // extensions dropped for an empty internal beam
  std::size_t mask_blocked = 0;         // extensions removed by the constraint
};

DecodeResult decode_single(const SequenceScorer& scorer, const DecodeConfig& config = {});

DecodeResult decode_ensemble_same(const std::vector<const SequenceScorer*>& scorers,
                                  const DecodeConfig& config = {});

struct InternalModel {
  const SequenceScorer* scorer = nullptr;
  const MappingTransducer* transducer = nullptr;
  TokenKind kind = TokenKind::PlainText;  // representation the internal tokens use
};

DecodeResult decode_multi_rep(const SequenceScorer& external,
                              const std::vector<InternalModel>& internals,
                              const DecodeConfig& config = {});

// Exact maximizer of external-times-internal sequence probability over all
// external sequences up to max_len and all internal paths through the
// transducer (epsilon runs bounded by expansion_cap). Tiny vocabularies only.
DecodeResult exhaustive_argmax(const SequenceScorer& external, const SequenceScorer& internal,
                               const MappingTransducer& transducer, int max_len,
                               int expansion_cap = 64);

}  // namespace syndec

#endif  // SYNDEC_DECODER_HPP
