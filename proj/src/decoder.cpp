#include "syndec/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>

namespace syndec {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

// ------------------------------------------------------------ constraints

MaskCategory mask_category(std::string_view token, const SymbolClassifier& classifier) {
  switch (classifier.classify(token)) {
    case SymbolClass::Bos: return MaskCategory::Bos;
    case SymbolClass::Eos: return MaskCategory::Eos;
    case SymbolClass::RuleEndNonterminal: return MaskCategory::RuleEndNonterminal;
    case SymbolClass::Nonterminal:
      if (!token.empty() && token.front() == '(') return MaskCategory::OpenBracket;
      if (token == ")") return MaskCategory::CloseBracket;
      return MaskCategory::PlainNonterminal;
    case SymbolClass::TerminalCont: return MaskCategory::TerminalCont;
    case SymbolClass::Terminal: return MaskCategory::TerminalFinal;
  }
  return MaskCategory::TerminalFinal;
}

WellformedMask::WellformedMask(TokenKind kind) : kind_(kind) {
  if (kind != TokenKind::LinearTree && kind != TokenKind::LinearDerivation)
    throw DecodeError("well-formedness constraints apply to syntax representations only");
}

MaskSet WellformedMask::allowed() const {
  MaskSet m{};
  if (dead_ || eos_seen_) return m;
  auto allow = [&m](MaskCategory c) { m[static_cast<std::size_t>(c)] = true; };

  if (kind_ == TokenKind::LinearTree) {
    if (closed_) {
      allow(MaskCategory::Eos);
      return m;
    }
    if (!started_) {
      allow(MaskCategory::OpenBracket);
      return m;
    }
    const Node& top = stack_.back();
    if (top.kind == Node::Terminal) {
      if (top.word_open) {
        allow(MaskCategory::TerminalCont);
        allow(MaskCategory::TerminalFinal);
      } else {
        allow(MaskCategory::CloseBracket);
      }
    } else if (top.kind == Node::Internal) {
      allow(MaskCategory::OpenBracket);
      allow(MaskCategory::CloseBracket);
    } else {
      allow(MaskCategory::OpenBracket);
      allow(MaskCategory::TerminalCont);
      allow(MaskCategory::TerminalFinal);
    }
    return m;
  }

  if (pending_ == 0) {
    allow(MaskCategory::Eos);
    return m;
  }
  switch (mode_) {
    case DerivMode::Boundary:
      allow(MaskCategory::PlainNonterminal);
      allow(MaskCategory::RuleEndNonterminal);
      if (started_) {
        allow(MaskCategory::TerminalCont);
        allow(MaskCategory::TerminalFinal);
      }
      break;
    case DerivMode::NtRun:
      allow(MaskCategory::PlainNonterminal);
      allow(MaskCategory::RuleEndNonterminal);
      break;
    case DerivMode::TermRun:
      allow(MaskCategory::TerminalCont);
      allow(MaskCategory::TerminalFinal);
      break;
  }
  return m;
}

void WellformedMask::consume(MaskCategory cat) {
  if (!mask_allows(allowed(), cat)) {
    dead_ = true;
    return;
  }
  if (cat == MaskCategory::Eos) {
    eos_seen_ = true;
    return;
  }
  if (kind_ == TokenKind::LinearTree) {
    switch (cat) {
      case MaskCategory::OpenBracket:
        if (!stack_.empty()) {
          ++stack_.back().children;
          stack_.back().kind = Node::Internal;
        }
        stack_.push_back(Node{});
        started_ = true;
        break;
      case MaskCategory::CloseBracket:
        stack_.pop_back();
        if (stack_.empty()) closed_ = true;
        break;
      case MaskCategory::TerminalCont:
        ++stack_.back().children;
        stack_.back().kind = Node::Terminal;
        stack_.back().word_open = true;
        break;
      case MaskCategory::TerminalFinal:
        ++stack_.back().children;
        stack_.back().kind = Node::Terminal;
        stack_.back().word_open = false;
        break;
      default:
        dead_ = true;
    }
    return;
  }
  switch (cat) {
    case MaskCategory::PlainNonterminal:
      mode_ = DerivMode::NtRun;
      ++run_nts_;
      break;
    case MaskCategory::RuleEndNonterminal:
      pending_ += run_nts_;  // -1 consumed, +run_nts_+1 produced
      run_nts_ = 0;
      mode_ = DerivMode::Boundary;
      started_ = true;
      break;
    case MaskCategory::TerminalCont:
      mode_ = DerivMode::TermRun;
      break;
    case MaskCategory::TerminalFinal:
      --pending_;
      mode_ = DerivMode::Boundary;
      break;
    default:
      dead_ = true;
  }
}

bool WellformedMask::complete() const {
  if (dead_) return false;
  if (kind_ == TokenKind::LinearTree) return closed_;
  return started_ && pending_ == 0 && mode_ == DerivMode::Boundary;
}

MaskSet wellformed_mask(TokenKind kind, const std::vector<std::string>& prefix,
                        const SymbolClassifier& classifier) {
  WellformedMask mask(kind);
  for (const std::string& tok : prefix) mask.consume(mask_category(tok, classifier));
  return mask.allowed();
}

// ------------------------------------------------------------ single / same-rep

namespace {

struct Hyp {
  std::vector<TokenId> tokens;
  double score = 0.0;
  ScorerState state;
  std::optional<WellformedMask> mask;
};

bool hyp_better(const Hyp& a, const Hyp& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

void check_common(const DecodeConfig& config) {
  if (config.beam < 1) throw DecodeError("beam must be >= 1");
  if (config.inner_beam < 1) throw DecodeError("inner beam must be >= 1");
  if (config.max_len < 1) throw DecodeError("max length must be >= 1");
  if (config.expansion_cap < 1) throw DecodeError("expansion cap must be >= 1");
  for (double w : config.ensemble_weights)
    if (!(w >= 0.0)) throw DecodeError("ensemble weights must be >= 0");
}

std::string id_text(const Vocabulary& vocab, const std::vector<TokenId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += vocab.token(ids[i]);
  }
  return out;
}

DecodeResult run_beam(const SequenceScorer& scorer, const DecodeConfig& config) {
  check_common(config);
  const Vocabulary& vocab = scorer.vocab();
  const TokenId v = static_cast<TokenId>(vocab.size());
  const bool constrain =
      config.constrain_wellformed &&
      (config.kind == TokenKind::LinearTree || config.kind == TokenKind::LinearDerivation);
  std::vector<MaskCategory> cats;
  if (constrain)
    for (TokenId id = 0; id < v; ++id)
      cats.push_back(mask_category(vocab.token(id), config.classifier));

  std::vector<Hyp> frontier(1);
  frontier[0].state = scorer.start();
  if (constrain) frontier[0].mask.emplace(config.kind);
  std::vector<Hyp> last = frontier;
  std::vector<Hyp> finished;
  std::size_t mask_blocked = 0;

  for (int step = 0; step < config.max_len && !frontier.empty(); ++step) {
    std::vector<Hyp> next;
    for (const Hyp& h : frontier) {
      const std::vector<double> lp = scorer.next_log_probs(h.state);
      const MaskSet allowed = h.mask ? h.mask->allowed() : MaskSet{};
      for (TokenId tok = 0; tok < v; ++tok) {
        if (tok == Vocabulary::kBosId) continue;
        const double step_lp = lp[static_cast<std::size_t>(tok)];
        if (step_lp == kNegInf) continue;
        if (h.mask && !mask_allows(allowed, cats[static_cast<std::size_t>(tok)])) {
          ++mask_blocked;
          continue;
        }
        if (tok == Vocabulary::kEosId) {
          Hyp f;
          f.tokens = h.tokens;
          f.score = h.score + step_lp;
          finished.push_back(std::move(f));
        } else if (static_cast<int>(h.tokens.size()) + 2 <= config.max_len) {
          Hyp n;
          n.tokens = h.tokens;
          n.tokens.push_back(tok);
          n.score = h.score + step_lp;
          n.state = scorer.advance(h.state, tok);
          if (h.mask) {
            n.mask = h.mask;
            n.mask->consume(cats[static_cast<std::size_t>(tok)]);
          }
          next.push_back(std::move(n));
        }
      }
    }
    std::stable_sort(next.begin(), next.end(), hyp_better);
    if (next.size() > static_cast<std::size_t>(config.beam))
      next.resize(static_cast<std::size_t>(config.beam));
    if (config.trace) {
      *config.trace << "step=" << step << " frontier=" << next.size()
                    << " finished=" << finished.size();
      if (!next.empty())
        *config.trace << " best_score=" << next.front().score << " best=\""
                      << id_text(vocab, next.front().tokens) << "\"";
      *config.trace << "\n";
    }
    if (!next.empty()) last = next;
    frontier = std::move(next);
  }

  DecodeResult result;
  result.tokens.kind = config.kind;
  result.mask_blocked = mask_blocked;
  const Hyp* best = nullptr;
  if (!finished.empty()) {
    best = &*std::min_element(finished.begin(), finished.end(),
                              [](const Hyp& a, const Hyp& b) { return hyp_better(a, b); });
    result.finished = true;
  } else {
    best = &*std::min_element(last.begin(), last.end(),
                              [](const Hyp& a, const Hyp& b) { return hyp_better(a, b); });
    result.finished = false;
  }
  result.score = best->score;
  for (TokenId id : best->tokens) result.tokens.tokens.push_back(vocab.token(id));
  return result;
}

}  // namespace

DecodeResult decode_single(const SequenceScorer& scorer, const DecodeConfig& config) {
  if (config.nonterminal_gamma != 0.0) {
    NonterminalPenaltyScorer penalized(scorer, config.nonterminal_gamma, config.classifier);
    return run_beam(penalized, config);
  }
  return run_beam(scorer, config);
}

DecodeResult decode_ensemble_same(const std::vector<const SequenceScorer*>& scorers,
                                  const DecodeConfig& config) {
  if (scorers.empty()) throw DecodeError("ensemble needs at least one scorer");
  LogLinearEnsemble ensemble(scorers, config.ensemble_weights);
  DecodeConfig inner = config;
  inner.ensemble_weights.clear();  // consumed by the ensemble wrapper
  if (config.nonterminal_gamma != 0.0) {
    NonterminalPenaltyScorer penalized(ensemble, config.nonterminal_gamma, config.classifier);
    return run_beam(penalized, inner);
  }
  return run_beam(ensemble, inner);
}

// ------------------------------------------------------------ multi-representation

namespace {

struct MrHyp {
  std::vector<TokenId> ext;
  double ext_lp = 0.0;
  ScorerState ext_state;
  std::vector<std::vector<SyncState>> lanes;  // per internal model, best first
  double combined = 0.0;
};

bool mr_better(const MrHyp& a, const MrHyp& b) {
  if (a.combined != b.combined) return a.combined > b.combined;
  if (a.ext != b.ext) return a.ext < b.ext;
  for (std::size_t m = 0; m < a.lanes.size(); ++m)
    if (a.lanes[m].front().consumed != b.lanes[m].front().consumed)
      return a.lanes[m].front().consumed < b.lanes[m].front().consumed;
  return false;
}

std::vector<std::string> token_texts(const Vocabulary& vocab, const std::vector<TokenId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(vocab.token(id));
  return out;
}

void verify_sync(const MrHyp& hyp, const std::vector<InternalModel>& internals,
                 const Vocabulary& vext) {
  const std::vector<std::string> expect = token_texts(vext, hyp.ext);
  for (std::size_t m = 0; m < internals.size(); ++m) {
    for (const SyncState& sync : hyp.lanes[m]) {
      const std::vector<std::string> got = internals[m].transducer->project(
          token_texts(internals[m].transducer->internal_vocab(), sync.consumed));
      if (got != expect)
        throw DecodeError("synchronization violated at external position " +
                          std::to_string(hyp.ext.size()) + " in " +
                          internals[m].transducer->name());
    }
  }
}

}  // namespace

DecodeResult decode_multi_rep(const SequenceScorer& external,
                              const std::vector<InternalModel>& internals,
                              const DecodeConfig& config) {
  check_common(config);
  if (internals.empty()) throw DecodeError("no internal models given");
  for (const InternalModel& im : internals)
    if (!im.scorer || !im.transducer) throw DecodeError("internal model entry incomplete");

  const std::size_t n = internals.size();
  std::vector<double> weights = config.ensemble_weights;
  if (weights.empty()) weights.assign(n, 1.0);
  if (weights.size() != n) throw DecodeError("ensemble weight count does not match model count");

  std::vector<std::unique_ptr<NonterminalPenaltyScorer>> owned;
  std::vector<const SequenceScorer*> lane_scorer(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (config.nonterminal_gamma != 0.0) {
      owned.push_back(std::make_unique<NonterminalPenaltyScorer>(
          *internals[m].scorer, config.nonterminal_gamma, internals[m].transducer->classifier()));
      lane_scorer[m] = owned.back().get();
    } else {
      lane_scorer[m] = internals[m].scorer;
    }
  }

  const AdvanceLimits limits{config.inner_beam, config.expansion_cap};
  const Vocabulary& vext = external.vocab();
  const TokenId v = static_cast<TokenId>(vext.size());

  MrHyp init;
  init.ext_state = external.start();
  init.lanes.reserve(n);
  for (std::size_t m = 0; m < n; ++m)
    init.lanes.push_back(internals[m].transducer->start(*lane_scorer[m]));

  std::vector<MrHyp> frontier{std::move(init)};
  std::vector<MrHyp> last = frontier;
  std::vector<MrHyp> finished;
  std::size_t pruned_dead = 0;
  std::ptrdiff_t first_dead_pos = -1;
  auto note_dead = [&](std::size_t pos) {
    ++pruned_dead;
    if (first_dead_pos < 0 || static_cast<std::ptrdiff_t>(pos) < first_dead_pos)
      first_dead_pos = static_cast<std::ptrdiff_t>(pos);
  };

  int steps_run = 0;
  for (int step = 0; step < config.max_len && !frontier.empty(); ++step) {
    steps_run = step;
    std::vector<MrHyp> next;
    for (const MrHyp& h : frontier) {
      const std::vector<double> ext_lps = external.next_log_probs(h.ext_state);
      for (TokenId tok = 0; tok < v; ++tok) {
        if (tok == Vocabulary::kBosId) continue;
        const double step_lp = ext_lps[static_cast<std::size_t>(tok)];
        if (step_lp == kNegInf) continue;
        if (tok == Vocabulary::kEosId) {
          std::vector<std::vector<SyncState>> closed(n);
          bool ok = true;
          for (std::size_t m = 0; m < n; ++m) {
            closed[m] =
                internals[m].transducer->advance_eos(*lane_scorer[m], h.lanes[m], limits);
            if (closed[m].empty()) {
              note_dead(h.ext.size());
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          MrHyp f;
          f.ext = h.ext;
          f.ext_lp = h.ext_lp + step_lp;
          f.lanes = std::move(closed);
          f.combined = f.ext_lp;
          for (std::size_t m = 0; m < n; ++m)
            f.combined += weights[m] * f.lanes[m].front().log_prob;
          finished.push_back(std::move(f));
        } else if (static_cast<int>(h.ext.size()) + 2 <= config.max_len) {
          const std::string& text = vext.token(tok);
          std::vector<std::vector<SyncState>> lanes(n);
          bool ok = true;
          for (std::size_t m = 0; m < n; ++m) {
            lanes[m] = internals[m].transducer->advance(*lane_scorer[m], h.lanes[m], text, limits);
            if (lanes[m].empty()) {
              note_dead(h.ext.size());
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          MrHyp nh;
          nh.ext = h.ext;
          nh.ext.push_back(tok);
          nh.ext_lp = h.ext_lp + step_lp;
          nh.ext_state = external.advance(h.ext_state, tok);
          nh.lanes = std::move(lanes);
          nh.combined = nh.ext_lp;
          for (std::size_t m = 0; m < n; ++m)
            nh.combined += weights[m] * nh.lanes[m].front().log_prob;
          if (config.check_sync) verify_sync(nh, internals, vext);
          next.push_back(std::move(nh));
        }
      }
    }
    std::stable_sort(next.begin(), next.end(), mr_better);
    if (next.size() > static_cast<std::size_t>(config.beam))
      next.resize(static_cast<std::size_t>(config.beam));
    if (config.trace) {
      *config.trace << "step=" << step << " frontier=" << next.size()
                    << " finished=" << finished.size() << " dead=" << pruned_dead;
      if (!next.empty())
        *config.trace << " best_score=" << next.front().combined << " best=\""
                      << id_text(vext, next.front().ext) << "\"";
      *config.trace << "\n";
    }
    if (!next.empty()) last = next;
    frontier = std::move(next);
  }

  DecodeResult result;
  result.tokens.kind = config.kind;
  result.pruned_dead_lanes = pruned_dead;
  const MrHyp* best = nullptr;
  if (!finished.empty()) {
    best = &*std::min_element(finished.begin(), finished.end(),
                              [](const MrHyp& a, const MrHyp& b) { return mr_better(a, b); });
    result.finished = true;
  } else if (steps_run + 1 >= config.max_len) {
    best = &*std::min_element(last.begin(), last.end(),
                              [](const MrHyp& a, const MrHyp& b) { return mr_better(a, b); });
    result.finished = false;
  } else {
    throw DecodeError("no synchronizable path at external position " +
                      std::to_string(first_dead_pos < 0 ? steps_run : first_dead_pos));
  }

  result.score = best->combined;
  for (TokenId id : best->ext) result.tokens.tokens.push_back(vext.token(id));
  result.internal.reserve(n);
  result.internal_scores.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    const SyncState& lane = best->lanes[m].front();
    std::vector<TokenId> ids = lane.consumed;
    if (!ids.empty() && ids.back() == Vocabulary::kEosId) ids.pop_back();
    TokenSeq seq;
    seq.kind = internals[m].kind;
    seq.tokens = token_texts(internals[m].transducer->internal_vocab(), ids);
    result.internal.push_back(std::move(seq));
    result.internal_scores.push_back(lane.log_prob);
  }
  return result;
}

// ------------------------------------------------------------ exhaustive oracle

DecodeResult exhaustive_argmax(const SequenceScorer& external, const SequenceScorer& internal,
                               const MappingTransducer& transducer, int max_len,
                               int expansion_cap) {
  if (max_len < 1) throw DecodeError("max length must be >= 1");
  const Vocabulary& vext = external.vocab();
  if (std::pow(static_cast<double>(vext.size()), max_len) > 1e6)
    throw DecodeError("exhaustive search guard exceeded: vocabulary too large for max length");
  if (!(internal.vocab() == transducer.internal_vocab()))
    throw DecodeError("internal scorer vocabulary does not match transducer");

  const Vocabulary& vint = transducer.internal_vocab();
  const SymbolClassifier& cls = transducer.classifier();
  const std::string& marker = cls.continuation_marker();
  const TokenId nint = static_cast<TokenId>(vint.size());
  std::vector<SymbolClass> id_class;
  id_class.reserve(vint.size());
  for (TokenId id = 0; id < nint; ++id) id_class.push_back(cls.classify(vint.token(id)));

  auto arc_for = [&](int state, SymbolClass c) -> const TransducerArc* {
    for (const TransducerArc& arc : transducer.arcs())
      if (arc.from == state && arc.cls == c) return &arc;
    return nullptr;
  };

  struct InnerBest {
    bool found = false;
    double lp = 0.0;
    std::vector<TokenId> path;
  };

  // Exact max over internal paths producing exactly `ext`, epsilon runs
  // bounded like the decoder's per-token expansion budget.
  auto best_internal = [&](const std::vector<TokenId>& ext) {
    std::vector<std::string> ext_text;
    ext_text.reserve(ext.size());
    for (TokenId id : ext) ext_text.push_back(vext.token(id));

    InnerBest best;
    std::vector<TokenId> path;
    std::function<void(std::size_t, std::size_t, int, const ScorerState&, double, int)> rec =
        [&](std::size_t j, std::size_t word_pos, int tstate, const ScorerState& st, double lp,
            int steps) {
          const std::vector<double> lpv = internal.next_log_probs(st);
          if (j == ext.size() && word_pos == 0 && transducer.is_final(tstate)) {
            const double eos_lp = lpv[static_cast<std::size_t>(Vocabulary::kEosId)];
            if (eos_lp != kNegInf) {
              const double total = lp + eos_lp;
              if (!best.found || total > best.lp) {
                best.found = true;
                best.lp = total;
                best.path = path;
                best.path.push_back(Vocabulary::kEosId);
              }
            }
          }
          if (steps >= expansion_cap) return;
          for (TokenId id = 0; id < nint; ++id) {
            if (id == Vocabulary::kBosId || id == Vocabulary::kEosId) continue;
            const double tok_lp = lpv[static_cast<std::size_t>(id)];
            if (tok_lp == kNegInf) continue;
            const TransducerArc* arc = arc_for(tstate, id_class[static_cast<std::size_t>(id)]);
            if (!arc) continue;
            const std::string& text = vint.token(id);
            std::size_t nj = j;
            std::size_t npos = word_pos;
            int nsteps = steps + 1;
            switch (arc->kind) {
              case ArcKind::Eps:
                break;
              case ArcKind::Identity:
                if (j >= ext.size() || word_pos != 0 || text != ext_text[j]) continue;
                nj = j + 1;
                nsteps = 0;
                break;
              case ArcKind::ConcatPiece: {
                if (j >= ext.size()) continue;
                const std::string_view piece =
                    std::string_view(text).substr(0, text.size() - marker.size());
                const std::string_view rest = std::string_view(ext_text[j]).substr(word_pos);
                if (piece.empty() || piece.size() >= rest.size() ||
                    rest.substr(0, piece.size()) != piece)
                  continue;
                npos = word_pos + piece.size();
                break;
              }
              case ArcKind::ConcatEnd: {
                if (j >= ext.size()) continue;
                const std::string_view rest = std::string_view(ext_text[j]).substr(word_pos);
                if (rest.empty() || text != rest) continue;
                nj = j + 1;
                npos = 0;
                nsteps = 0;
                break;
              }
            }
            path.push_back(id);
            rec(nj, npos, arc->to, internal.advance(st, id), lp + tok_lp, nsteps);
            path.pop_back();
          }
        };
    rec(0, 0, transducer.start_state(), internal.start(), 0.0, 0);
    return best;
  };

  struct Best {
    bool found = false;
    double combined = 0.0;
    double ext_lp = 0.0;
    std::vector<TokenId> ext;
    InnerBest inner;
  };
  Best best;

  std::vector<TokenId> prefix;
  std::function<void(const ScorerState&, double)> rec_ext = [&](const ScorerState& st,
                                                                double ext_lp) {
    const std::vector<double> lp = external.next_log_probs(st);
    const double eos_lp = lp[static_cast<std::size_t>(Vocabulary::kEosId)];
    if (eos_lp != kNegInf) {
      const InnerBest inner = best_internal(prefix);
      if (inner.found) {
        const double full_ext = ext_lp + eos_lp;
        double combined = full_ext;
        combined += 1.0 * inner.lp;
        if (!best.found || combined > best.combined) {
          best.found = true;
          best.combined = combined;
          best.ext_lp = full_ext;
          best.ext = prefix;
          best.inner = inner;
        }
      }
    }
    if (static_cast<int>(prefix.size()) + 2 > max_len) return;
    for (TokenId tok = 0; tok < static_cast<TokenId>(vext.size()); ++tok) {
      if (tok == Vocabulary::kBosId || tok == Vocabulary::kEosId) continue;
      const double tok_lp = lp[static_cast<std::size_t>(tok)];
      if (tok_lp == kNegInf) continue;
      prefix.push_back(tok);
      rec_ext(external.advance(st, tok), ext_lp + tok_lp);
      prefix.pop_back();
    }
  };
  rec_ext(external.start(), 0.0);

  if (!best.found) throw DecodeError("no synchronizable sequence within the length limit");

  DecodeResult result;
  result.score = best.combined;
  result.finished = true;
  for (TokenId id : best.ext) result.tokens.tokens.push_back(vext.token(id));
  std::vector<TokenId> ids = best.inner.path;
  if (!ids.empty() && ids.back() == Vocabulary::kEosId) ids.pop_back();
  TokenSeq seq;
  seq.tokens = token_texts(vint, ids);
  result.internal.push_back(std::move(seq));
  result.internal_scores.push_back(best.inner.lp);
  return result;
}

}  // namespace syndec
