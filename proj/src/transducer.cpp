#include "syndec/transducer.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace syndec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t class_index(SymbolClass c) { return static_cast<std::size_t>(c); }

const char* arc_kind_name(ArcKind k) {
  switch (k) {
    case ArcKind::Eps: return "eps";
    case ArcKind::Identity: return "identity";
    case ArcKind::ConcatPiece: return "concat-piece";
    case ArcKind::ConcatEnd: return "concat-end";
  }
  return "?";
}

struct Partial {
  int tstate = 0;
  ScorerState inner;
  double lp = 0.0;
  std::vector<TokenId> consumed;
  std::size_t word_pos = 0;  // matched chars of the current external word
  int steps = 0;             // internal symbols consumed in this call
};

bool better(const Partial& a, const Partial& b) {
  if (a.lp != b.lp) return a.lp > b.lp;
  return a.consumed < b.consumed;
}

void keep_best(std::vector<Partial>& pool, std::size_t limit) {
  std::stable_sort(pool.begin(), pool.end(), better);
  if (pool.size() > limit) pool.resize(limit);
}

std::vector<SyncState> to_sync(std::vector<Partial> pool) {
  std::vector<SyncState> out;
  out.reserve(pool.size());
  for (Partial& p : pool)
    out.push_back({p.tstate, std::move(p.inner), p.lp, std::move(p.consumed)});
  return out;
}

}  // namespace

MappingTransducer::MappingTransducer(std::string name, Vocabulary vocab,
                                     SymbolClassifier classifier, int n_states,
                                     int start_state, std::vector<int> finals,
                                     std::vector<TransducerArc> arcs)
    : name_(std::move(name)),
      vocab_(std::move(vocab)),
      classifier_(std::move(classifier)),
      n_states_(n_states),
      start_state_(start_state),
      final_(static_cast<std::size_t>(n_states), false),
      arcs_(std::move(arcs)) {
  for (int f : finals) final_[static_cast<std::size_t>(f)] = true;
  id_class_.reserve(vocab_.size());
  for (std::size_t id = 0; id < vocab_.size(); ++id) {
    SymbolClass cls = classifier_.classify(vocab_.token(static_cast<TokenId>(id)));
    id_class_.push_back(cls);
    class_ids_[class_index(cls)].push_back(static_cast<TokenId>(id));
  }
}

const TransducerArc* MappingTransducer::arc_for(int state, SymbolClass cls) const {
  for (const TransducerArc& arc : arcs_)
    if (arc.from == state && arc.cls == cls) return &arc;
  return nullptr;
}

std::string_view MappingTransducer::stripped(TokenId id) const {
  std::string_view text = vocab_.token(id);
  return text.substr(0, text.size() - classifier_.continuation_marker().size());
}

std::vector<SyncState> MappingTransducer::start(const SequenceScorer& inner) const {
  if (!(inner.vocab() == vocab_))
    throw TransducerError("scorer vocabulary does not match transducer " + name_);
  return {SyncState{start_state_, inner.start(), 0.0, {}}};
}

std::vector<SyncState> MappingTransducer::advance(const SequenceScorer& inner,
                                                  const std::vector<SyncState>& states,
                                                  const std::string& external_token,
                                                  const AdvanceLimits& limits) const {
  if (!(inner.vocab() == vocab_))
    throw TransducerError("scorer vocabulary does not match transducer " + name_);
  if (external_token == kEosToken) throw TransducerError("</s> is consumed by advance_eos");
  if (external_token == kBosToken) throw TransducerError("<s> is never emitted");

  const std::size_t beam = static_cast<std::size_t>(std::max(1, limits.inner_beam));
  std::vector<Partial> frontier;
  frontier.reserve(states.size());
  for (const SyncState& s : states)
    frontier.push_back({s.tstate, s.inner, s.log_prob, s.consumed, 0, 0});
  std::vector<Partial> done;

  while (!frontier.empty()) {
    std::vector<Partial> next;
    for (const Partial& p : frontier) {
      if (p.steps >= limits.expansion_cap) continue;
      const std::vector<double> lp = inner.next_log_probs(p.inner);
      auto step = [&](const TransducerArc& arc, TokenId id, std::size_t new_word_pos,
                      std::vector<Partial>& sink) {
        const double tok_lp = lp[static_cast<std::size_t>(id)];
        if (tok_lp == kNegInf) return;
        Partial q;
        q.tstate = arc.to;
        q.inner = inner.advance(p.inner, id);
        q.lp = p.lp + tok_lp;
        q.consumed = p.consumed;
        q.consumed.push_back(id);
        q.word_pos = new_word_pos;
        q.steps = p.steps + 1;
        sink.push_back(std::move(q));
      };
      for (const TransducerArc& arc : arcs_) {
        if (arc.from != p.tstate) continue;
        switch (arc.kind) {
          case ArcKind::Eps:
            for (TokenId id : class_ids_[class_index(arc.cls)]) step(arc, id, 0, next);
            break;
          case ArcKind::Identity:
            if (auto id = vocab_.find(external_token);
                id && id_class_[static_cast<std::size_t>(*id)] == arc.cls)
              step(arc, *id, 0, done);
            break;
          case ArcKind::ConcatPiece: {
            const std::string_view rest = std::string_view(external_token).substr(p.word_pos);
            for (TokenId id : class_ids_[class_index(arc.cls)]) {
              const std::string_view piece = stripped(id);
              if (!piece.empty() && piece.size() < rest.size() &&
                  rest.substr(0, piece.size()) == piece)
                step(arc, id, p.word_pos + piece.size(), next);
            }
            break;
          }
          case ArcKind::ConcatEnd: {
            const std::string_view rest = std::string_view(external_token).substr(p.word_pos);
            if (rest.empty()) break;
            if (auto id = vocab_.find(rest);
                id && id_class_[static_cast<std::size_t>(*id)] == arc.cls)
              step(arc, *id, external_token.size(), done);
            break;
          }
        }
      }
    }
    keep_best(next, beam);
    frontier = std::move(next);
  }
  keep_best(done, beam);
  return to_sync(std::move(done));
}

std::vector<SyncState> MappingTransducer::advance_eos(const SequenceScorer& inner,
                                                      const std::vector<SyncState>& states,
                                                      const AdvanceLimits& limits) const {
  if (!(inner.vocab() == vocab_))
    throw TransducerError("scorer vocabulary does not match transducer " + name_);

  const std::size_t beam = static_cast<std::size_t>(std::max(1, limits.inner_beam));
  std::vector<Partial> frontier;
  frontier.reserve(states.size());
  for (const SyncState& s : states)
    frontier.push_back({s.tstate, s.inner, s.log_prob, s.consumed, 0, 0});
  std::vector<Partial> done;

  while (!frontier.empty()) {
    std::vector<Partial> next;
    for (const Partial& p : frontier) {
      const std::vector<double> lp = inner.next_log_probs(p.inner);
      if (final_[static_cast<std::size_t>(p.tstate)]) {
        const double eos_lp = lp[static_cast<std::size_t>(Vocabulary::kEosId)];
        if (eos_lp != kNegInf) {
          Partial q = p;
          q.inner = inner.advance(p.inner, Vocabulary::kEosId);
          q.lp += eos_lp;
          q.consumed.push_back(Vocabulary::kEosId);
          done.push_back(std::move(q));
        }
      }
      if (p.steps >= limits.expansion_cap) continue;
      for (const TransducerArc& arc : arcs_) {
        if (arc.from != p.tstate || arc.kind != ArcKind::Eps) continue;
        for (TokenId id : class_ids_[class_index(arc.cls)]) {
          const double tok_lp = lp[static_cast<std::size_t>(id)];
          if (tok_lp == kNegInf) continue;
          Partial q;
          q.tstate = arc.to;
          q.inner = inner.advance(p.inner, id);
          q.lp = p.lp + tok_lp;
          q.consumed = p.consumed;
          q.consumed.push_back(id);
          q.steps = p.steps + 1;
          next.push_back(std::move(q));
        }
      }
    }
    keep_best(next, beam);
    frontier = std::move(next);
  }
  keep_best(done, beam);
  return to_sync(std::move(done));
}

std::vector<std::string> MappingTransducer::project(
    const std::vector<std::string>& internal_tokens) const {
  std::vector<std::string> out;
  std::string buffer;
  int state = start_state_;
  const std::string& marker = classifier_.continuation_marker();
  for (std::size_t i = 0; i < internal_tokens.size(); ++i) {
    const std::string& tok = internal_tokens[i];
    const SymbolClass cls = classifier_.classify(tok);
    if (cls == SymbolClass::Eos) {
      if (i + 1 != internal_tokens.size())
        throw TransducerError(name_ + ": </s> before end of sequence");
      if (!final_[static_cast<std::size_t>(state)] || !buffer.empty())
        throw TransducerError(name_ + ": sequence ends in a non-final state");
      return out;
    }
    const TransducerArc* arc = arc_for(state, cls);
    if (!arc)
      throw TransducerError(name_ + ": no arc for " + symbol_class_name(cls) + " token '" +
                            tok + "' at position " + std::to_string(i));
    switch (arc->kind) {
      case ArcKind::Eps:
        break;
      case ArcKind::Identity:
        out.push_back(tok);
        break;
      case ArcKind::ConcatPiece:
        buffer += tok.substr(0, tok.size() - marker.size());
        break;
      case ArcKind::ConcatEnd:
        out.push_back(buffer + tok);
        buffer.clear();
        break;
    }
    state = arc->to;
  }
  if (!buffer.empty()) throw TransducerError(name_ + ": sequence ends inside a word");
  if (!final_[static_cast<std::size_t>(state)])
    throw TransducerError(name_ + ": sequence ends in a non-final state");
  return out;
}

std::string MappingTransducer::dump() const {
  std::ostringstream out;
  out << "transducer " << name_ << "\n";
  out << "states " << n_states_ << "\n";
  out << "start " << start_state_ << "\n";
  out << "finals";
  for (int s = 0; s < n_states_; ++s)
    if (final_[static_cast<std::size_t>(s)]) out << " " << s;
  out << "\n";
  for (const TransducerArc& arc : arcs_)
    out << "arc " << arc.from << " " << symbol_class_name(arc.cls) << " "
        << arc_kind_name(arc.kind) << " " << arc.to << "\n";
  return out.str();
}

MappingTransducer build_syntax_to_plain(Vocabulary internal_vocab, SymbolClassifier classifier) {
  std::vector<TransducerArc> arcs = {
      {0, SymbolClass::Nonterminal, ArcKind::Eps, 0},
      {0, SymbolClass::RuleEndNonterminal, ArcKind::Eps, 0},
      {0, SymbolClass::TerminalCont, ArcKind::Identity, 0},
      {0, SymbolClass::Terminal, ArcKind::Identity, 0},
  };
  return MappingTransducer("syntax_to_plain", std::move(internal_vocab), std::move(classifier),
                           1, 0, {0}, std::move(arcs));
}

MappingTransducer build_pos_to_plain(Vocabulary internal_vocab, SymbolClassifier classifier) {
  std::vector<TransducerArc> arcs = {
      {0, SymbolClass::Nonterminal, ArcKind::Eps, 1},
      {1, SymbolClass::TerminalCont, ArcKind::Identity, 1},
      {1, SymbolClass::Terminal, ArcKind::Identity, 0},
  };
  return MappingTransducer("pos_to_plain", std::move(internal_vocab), std::move(classifier), 2,
                           0, {0}, std::move(arcs));
}

MappingTransducer build_word_to_bpe(Vocabulary internal_vocab, SymbolClassifier classifier) {
  std::vector<TransducerArc> arcs = {
      {0, SymbolClass::TerminalCont, ArcKind::ConcatPiece, 1},
      {0, SymbolClass::Terminal, ArcKind::ConcatEnd, 0},
      {1, SymbolClass::TerminalCont, ArcKind::ConcatPiece, 1},
      {1, SymbolClass::Terminal, ArcKind::ConcatEnd, 0},
  };
  return MappingTransducer("word_to_bpe", std::move(internal_vocab), std::move(classifier), 2, 0,
                           {0}, std::move(arcs));
}

}  // namespace syndec
