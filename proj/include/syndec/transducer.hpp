#ifndef SYNDEC_TRANSDUCER_HPP
#define SYNDEC_TRANSDUCER_HPP

#include <array>
#include <string>
#include <vector>

#include "syndec/scorer.hpp"
#include "syndec/symbols.hpp"
#include "syndec/vocab.hpp"

namespace syndec {

class TransducerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// What an internal token contributes to the external stream.
enum class ArcKind {
  Eps,          // consumed silently (structural symbols)
  Identity,     // must equal the external token
  ConcatPiece,  // marker-stripped prefix of the external word, word continues
  ConcatEnd,    // completes the external word
};

struct TransducerArc {
  int from;
  SymbolClass cls;
  ArcKind kind;
  int to;
};

// One synchronized internal continuation: transducer state, internal scorer
// state, cumulative internal log probability, and the internal tokens
// consumed so far (from the start of the sequence).
struct SyncState {
  int tstate = 0;
  ScorerState inner;
  double log_prob = 0.0;
  std::vector<TokenId> consumed;
};

struct AdvanceLimits {
  int inner_beam = 8;      // synchronized continuations kept per external token
  int expansion_cap = 64;  // internal symbols consumed per external token, at most
};

// Finite-state mapping between an internal token stream and an external one.
// Arcs are written over symbol classes, so the machine itself is independent
// of the vocabulary; candidate internal tokens are enumerated from the
// attached vocabulary when an external token is consumed.
class MappingTransducer {
 public:
  const std::string& name() const { return name_; }
  const Vocabulary& internal_vocab() const { return vocab_; }
  const SymbolClassifier& classifier() const { return classifier_; }

  // Initial synchronized set: empty internal prefix at the start state.
  std::vector<SyncState> start(const SequenceScorer& inner) const;

  // All bounded internal continuations that produce exactly `external_token`,
  // best-first by cumulative internal log probability.
  std::vector<SyncState> advance(const SequenceScorer& inner,
                                 const std::vector<SyncState>& states,
                                 const std::string& external_token,
                                 const AdvanceLimits& limits = {}) const;

  // Continuations that close the internal sequence: structural symbols may
  // still be consumed, then </s> is scored in a final transducer state.
  std::vector<SyncState> advance_eos(const SequenceScorer& inner,
                                     const std::vector<SyncState>& states,
                                     const AdvanceLimits& limits = {}) const;

  // Deterministic projection of an internal token sequence onto the external
  // stream. Throws if the sequence does not fit the machine or ends inside a
  // word.
  std::vector<std::string> project(const std::vector<std::string>& internal_tokens) const;

  bool is_final(int tstate) const { return final_[static_cast<std::size_t>(tstate)]; }
  int start_state() const { return start_state_; }
  const std::vector<TransducerArc>& arcs() const { return arcs_; }
  std::string dump() const;

  friend MappingTransducer build_syntax_to_plain(Vocabulary internal_vocab,
                                                 SymbolClassifier classifier);
  friend MappingTransducer build_pos_to_plain(Vocabulary internal_vocab,
                                              SymbolClassifier classifier);
  friend MappingTransducer build_word_to_bpe(Vocabulary internal_vocab,
                                             SymbolClassifier classifier);

 private:
  MappingTransducer(std::string name, Vocabulary vocab, SymbolClassifier classifier,
                    int n_states, int start_state, std::vector<int> finals,
                    std::vector<TransducerArc> arcs);

  const TransducerArc* arc_for(int state, SymbolClass cls) const;
  std::string_view stripped(TokenId id) const;

  std::string name_;
  Vocabulary vocab_;
  SymbolClassifier classifier_;
  int n_states_ = 1;
  int start_state_ = 0;
  std::vector<bool> final_;
  std::vector<TransducerArc> arcs_;
  std::vector<SymbolClass> id_class_;
  std::array<std::vector<TokenId>, 6> class_ids_;
};

// Internal: linearized trees or derivations whose leaf pieces match the
// external stream one-to-one. External: the plain stream, same segmentation.
MappingTransducer build_syntax_to_plain(Vocabulary internal_vocab, SymbolClassifier classifier);

// Internal: alternating tag / word-piece stream. External: the plain stream.
MappingTransducer build_pos_to_plain(Vocabulary internal_vocab, SymbolClassifier classifier);

// Internal: marker-segmented subword stream. External: unsegmented words;
// consecutive internal pieces concatenate to one external word.
MappingTransducer build_word_to_bpe(Vocabulary internal_vocab, SymbolClassifier classifier);

}  // namespace syndec

#endif  // SYNDEC_TRANSDUCER_HPP
