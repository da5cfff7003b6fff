#include "syndec/decoder.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "support/random_trees.hpp"
#include "syndec/scorer.hpp"
#include "syndec/transducer.hpp"
#include "syndec/tree.hpp"

using namespace syndec;
using syndec::testsupport::RandomTableScorer;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using MC = MaskCategory;

MaskSet only(std::initializer_list<MC> cats) {
  MaskSet m{};
  for (MC c : cats) m[static_cast<std::size_t>(c)] = true;
  return m;
}

Vocabulary words_vocab(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const std::string& w : words) v.add(w);
  return v;
}

std::vector<TokenId> ids_of(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
  std::vector<TokenId> ids;
  for (const std::string& t : tokens) ids.push_back(vocab.require(t));
  return ids;
}

struct BruteBest {
  std::vector<TokenId> tokens;
  double score = 0.0;
  bool found = false;
};

// Exact argmax over external sequences, visited in lexicographic order so
// strict improvement reproduces the decoder's tie-break.
void brute_rec(const SequenceScorer& scorer, const ScorerState& state,
               std::vector<TokenId>& prefix, double score, int max_len, double gamma,
               const SymbolClassifier& cls, BruteBest& best) {
  const std::vector<double> lp = scorer.next_log_probs(state);
  const double eos = lp[static_cast<std::size_t>(Vocabulary::kEosId)];
  if (eos != -kInf) {
    const double total = score + eos;
    if (!best.found || total > best.score) {
      best.found = true;
      best.score = total;
      best.tokens = prefix;
    }
  }
  if (static_cast<int>(prefix.size()) + 2 > max_len) return;
  for (TokenId tok = 2; tok < static_cast<TokenId>(scorer.vocab().size()); ++tok) {
    double step = lp[static_cast<std::size_t>(tok)];
    if (step == -kInf) continue;
    if (gamma != 0.0) {
      const SymbolClass c = cls.classify(scorer.vocab().token(tok));
      if (c == SymbolClass::Nonterminal || c == SymbolClass::RuleEndNonterminal) step += gamma;
    }
    prefix.push_back(tok);
    brute_rec(scorer, scorer.advance(state, tok), prefix, score + step, max_len, gamma, cls,
              best);
    prefix.pop_back();
  }
}

BruteBest brute_argmax(const SequenceScorer& scorer, int max_len, double gamma = 0.0,
                       const SymbolClassifier& cls = SymbolClassifier()) {
  BruteBest best;
  std::vector<TokenId> prefix;
  brute_rec(scorer, scorer.start(), prefix, 0.0, max_len, gamma, cls, best);
  return best;
}

std::size_t count_nonterminal_tokens(const TokenSeq& seq, const SymbolClassifier& cls) {
  std::size_t n = 0;
  for (const std::string& t : seq.tokens) {
    const SymbolClass c = cls.classify(t);
    if (c == SymbolClass::Nonterminal || c == SymbolClass::RuleEndNonterminal) ++n;
  }
  return n;
}

// First step prefers "NP"; every later step strongly prefers stopping.
class TwoStepScorer final : public SequenceScorer {
 public:
  explicit TwoStepScorer(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  const Vocabulary& vocab() const override { return vocab_; }

  ScorerState start() const override { return std::make_shared<Depth>(0); }

  std::vector<double> next_log_probs(const ScorerState& state) const override {
    const int depth = dynamic_cast<const Depth&>(*state).value;
    // ids: <s> </s> NP dog cat
    if (depth == 0) return logs({0.01, 0.05, 0.60, 0.25, 0.09});
    return logs({0.01, 0.90, 0.03, 0.03, 0.03});
  }

  ScorerState advance(const ScorerState& state, TokenId) const override {
    return std::make_shared<Depth>(dynamic_cast<const Depth&>(*state).value + 1);
  }

 private:
  struct Depth final : ScorerStateBase {
    explicit Depth(int v) : value(v) {}
    int value;
  };
  static std::vector<double> logs(std::vector<double> p) {
    for (double& v : p) v = std::log(v);
    return p;
  }
  Vocabulary vocab_;
};

const char* kT0 =
    "(ROOT (S (NP (DT No ) (NNS complications ) ) (VP (VBD occurred ) ) ) )";

}  // namespace

TEST_SUITE("decoder") {

TEST_CASE("mask categories follow token shape") {
  const SymbolClassifier cls({"NP", "S"});
  CHECK(mask_category("(S", cls) == MC::OpenBracket);
  CHECK(mask_category("(XYZ", cls) == MC::OpenBracket);
  CHECK(mask_category(")", cls) == MC::CloseBracket);
  CHECK(mask_category("NP", cls) == MC::PlainNonterminal);
  CHECK(mask_category("VP</R>", cls) == MC::RuleEndNonterminal);
  CHECK(mask_category("lo@@", cls) == MC::TerminalCont);
  CHECK(mask_category("dog", cls) == MC::TerminalFinal);
  CHECK(mask_category("</s>", cls) == MC::Eos);
  CHECK(mask_category("<s>", cls) == MC::Bos);
  CHECK_THROWS_AS(WellformedMask(TokenKind::PlainText), DecodeError);
  CHECK_THROWS_AS(WellformedMask(TokenKind::PosText), DecodeError);
}

TEST_CASE("linear tree mask walks the bracket grammar") {
  WellformedMask m(TokenKind::LinearTree);
  CHECK(m.allowed() == only({MC::OpenBracket}));
  CHECK_FALSE(m.complete());

  m.consume(MC::OpenBracket);  // (ROOT
  CHECK(m.allowed() == only({MC::OpenBracket, MC::TerminalCont, MC::TerminalFinal}));

  m.consume(MC::OpenBracket);  // (NN
  m.consume(MC::TerminalCont);  // compli@@
  CHECK(m.allowed() == only({MC::TerminalCont, MC::TerminalFinal}));
  m.consume(MC::TerminalFinal);  // cations
  CHECK(m.allowed() == only({MC::CloseBracket}));  // one word per preterminal
  m.consume(MC::CloseBracket);
  CHECK(m.allowed() == only({MC::OpenBracket, MC::CloseBracket}));  // internal node now
  m.consume(MC::CloseBracket);  // root closed
  CHECK(m.allowed() == only({MC::Eos}));
  CHECK(m.complete());
  m.consume(MC::Eos);
  CHECK(m.allowed() == MaskSet{});
  CHECK_FALSE(m.dead());

  WellformedMask bad(TokenKind::LinearTree);
  bad.consume(MC::CloseBracket);
  CHECK(bad.dead());
  CHECK(bad.allowed() == MaskSet{});
  CHECK_FALSE(bad.complete());
}

TEST_CASE("linear derivation mask tracks pending non-terminals") {
  const SymbolClassifier cls({"ROOT", "S", "NP", "VP", "DT", "NNS", "VBD"});
  WellformedMask m(TokenKind::LinearDerivation);
  // Before the first rule only non-terminal symbols may appear.
  CHECK(m.allowed() == only({MC::PlainNonterminal, MC::RuleEndNonterminal}));

  const std::vector<std::string> row4 = {"S</R>", "NP",  "VP</R>",        "DT",      "NNS</R>",
                                         "No",    "complications", "VBD</R>", "occurred"};
  for (const std::string& tok : row4) {
    CHECK(mask_allows(m.allowed(), mask_category(tok, cls)));
    m.consume(mask_category(tok, cls));
    CHECK_FALSE(m.dead());
  }
  CHECK(m.complete());
  CHECK(m.allowed() == only({MC::Eos}));

  // Terminals may not interrupt a run of right-hand-side non-terminals.
  WellformedMask run(TokenKind::LinearDerivation);
  run.consume(MC::RuleEndNonterminal);  // S</R>
  run.consume(MC::PlainNonterminal);    // NP ...
  CHECK(run.allowed() == only({MC::PlainNonterminal, MC::RuleEndNonterminal}));
  run.consume(MC::TerminalFinal);
  CHECK(run.dead());

  // A subword terminal spans TerminalCont then TerminalFinal.
  WellformedMask sub(TokenKind::LinearDerivation);
  sub.consume(MC::RuleEndNonterminal);
  sub.consume(MC::TerminalCont);
  CHECK(sub.allowed() == only({MC::TerminalCont, MC::TerminalFinal}));
  sub.consume(MC::TerminalFinal);
  CHECK(sub.complete());
}

TEST_CASE("masks admit every prefix of valid syntax sequences") {
  std::mt19937_64 rng(555);
  for (int i = 0; i < 100; ++i) {
    const Tree tree = testsupport::random_tree(rng);
    const SymbolClassifier cls = testsupport::classifier_for(tree);

    const TokenSeq lin = linearize_tree(tree);
    WellformedMask tm(TokenKind::LinearTree);
    for (const std::string& tok : lin.tokens) {
      const MC cat = mask_category(tok, cls);
      REQUIRE(mask_allows(tm.allowed(), cat));
      tm.consume(cat);
    }
    REQUIRE(tm.complete());
    REQUIRE(mask_allows(tm.allowed(), MC::Eos));

    const TokenSeq linder = derivation_to_linear(tree_to_derivation(tree));
    WellformedMask dm(TokenKind::LinearDerivation);
    for (const std::string& tok : linder.tokens) {
      const MC cat = mask_category(tok, cls);
      REQUIRE(mask_allows(dm.allowed(), cat));
      dm.consume(cat);
    }
    REQUIRE(dm.complete());

    // The one-shot helper replays the same prefix.
    if (i < 5) {
      for (std::size_t k = 0; k <= lin.tokens.size(); k += 3) {
        const std::vector<std::string> prefix(lin.tokens.begin(),
                                              lin.tokens.begin() + static_cast<long>(k));
        WellformedMask inc(TokenKind::LinearTree);
        for (const std::string& tok : prefix) inc.consume(mask_category(tok, cls));
        CHECK(wellformed_mask(TokenKind::LinearTree, prefix, cls) == inc.allowed());
      }
    }
  }
}

TEST_CASE("single-model beam equals brute force on tiny vocabularies") {
  const Vocabulary vocab = words_vocab({"a", "b", "c"});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomTableScorer scorer(vocab, seed);
    DecodeConfig cfg;
    cfg.beam = 128;  // exhaustive for 3 content tokens
    cfg.max_len = 4;
    const DecodeResult got = decode_single(scorer, cfg);
    const BruteBest want = brute_argmax(scorer, 4);
    REQUIRE(want.found);
    CHECK(got.finished);
    CHECK(got.tokens.tokens.size() == want.tokens.size());
    for (std::size_t i = 0; i < want.tokens.size(); ++i)
      CHECK(got.tokens.tokens[i] == vocab.token(want.tokens[i]));
    CHECK(got.score == want.score);
  }
}

TEST_CASE("narrow beams never beat the exhaustive beam") {
  const Vocabulary vocab = words_vocab({"a", "b", "c"});
  const RandomTableScorer scorer(vocab, 77);
  DecodeConfig wide;
  wide.beam = 256;
  wide.max_len = 5;
  const double optimum = decode_single(scorer, wide).score;
  for (int beam : {1, 2, 4, 8}) {
    DecodeConfig cfg;
    cfg.beam = beam;
    cfg.max_len = 5;
    const DecodeResult r = decode_single(scorer, cfg);
    CHECK(r.score <= optimum);
    const DecodeResult again = decode_single(scorer, cfg);
    CHECK(again.tokens == r.tokens);  // deterministic
    CHECK(again.score == r.score);
  }
}

TEST_CASE("a fixed scorer forces its reference sequence") {
  Vocabulary vocab = words_vocab({"the", "cat", "sat"});
  const std::vector<TokenId> ref = ids_of(vocab, {"the", "cat", "sat"});
  const FixedSequenceScorer scorer(vocab, ref);

  DecodeConfig cfg;
  cfg.beam = 2;
  cfg.max_len = 4;  // three tokens plus </s>
  const DecodeResult r = decode_single(scorer, cfg);
  CHECK(r.finished);
  CHECK(r.tokens.tokens == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(r.score == 0.0);

  // A tighter length budget cuts the sequence off unfinished.
  cfg.max_len = 3;
  const DecodeResult cut = decode_single(scorer, cfg);
  CHECK_FALSE(cut.finished);
  CHECK(cut.tokens.tokens == std::vector<std::string>{"the", "cat"});

  cfg.max_len = 1;  // only </s> fits, but the fixed path forbids it
  const DecodeResult stub = decode_single(scorer, cfg);
  CHECK_FALSE(stub.finished);
  CHECK(stub.tokens.tokens.empty());
}

TEST_CASE("trace reports one line per step") {
  Vocabulary vocab = words_vocab({"the", "cat"});
  const FixedSequenceScorer scorer(vocab, ids_of(vocab, {"the", "cat"}));
  std::ostringstream trace;
  DecodeConfig cfg;
  cfg.beam = 2;
  cfg.trace = &trace;
  const DecodeResult r = decode_single(scorer, cfg);
  CHECK(r.finished);
  CHECK(trace.str() ==
        "step=0 frontier=1 finished=0 best_score=0 best=\"the\"\n"
        "step=1 frontier=1 finished=0 best_score=0 best=\"the cat\"\n"
        "step=2 frontier=0 finished=1\n");
}

TEST_CASE("equal scores break ties toward the smaller sequence") {
  const Vocabulary vocab = words_vocab({"a", "b"});
  const UniformScorer scorer(vocab);
  std::ostringstream trace;
  DecodeConfig cfg;
  cfg.beam = 1;
  cfg.max_len = 2;
  cfg.trace = &trace;
  const DecodeResult r = decode_single(scorer, cfg);
  // "a" and "b" tie at step 0; the beam keeps the lexicographically smaller.
  CHECK(trace.str().find("best=\"a\"") != std::string::npos);
  // The empty sequence outscores any one-token sequence under a uniform model.
  CHECK(r.finished);
  CHECK(r.tokens.tokens.empty());
  CHECK(r.score == doctest::Approx(std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("nonterminal penalty steers decoding away from non-terminals") {
  const Vocabulary vocab = words_vocab({"NP", "dog", "cat"});
  const SymbolClassifier cls({"NP"});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomTableScorer scorer(vocab, seed);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double gamma : {0.0, -0.5, -1.0, -2.0}) {
      DecodeConfig cfg;
      cfg.beam = 128;
      cfg.max_len = 4;
      cfg.nonterminal_gamma = gamma;
      cfg.classifier = cls;
      const DecodeResult got = decode_single(scorer, cfg);
      const BruteBest want = brute_argmax(scorer, 4, gamma, cls);
      REQUIRE(want.found);
      CHECK(got.score == want.score);
      REQUIRE(got.tokens.tokens.size() == want.tokens.size());
      for (std::size_t i = 0; i < want.tokens.size(); ++i)
        CHECK(got.tokens.tokens[i] == vocab.token(want.tokens[i]));

      // Exact argmax makes the non-terminal count monotone in the penalty.
      const std::size_t nts = count_nonterminal_tokens(got.tokens, cls);
      CHECK(nts <= previous);
      previous = nts;
    }
  }

  // A model whose best sequence is the bare non-terminal: the penalty first
  // narrows its margin, then flips the argmax to a plain word.
  const TwoStepScorer steered(vocab);
  std::vector<std::size_t> counts;
  for (double gamma : {0.0, -0.5, -1.0, -2.0}) {
    DecodeConfig cfg;
    cfg.beam = 32;
    cfg.max_len = 3;
    cfg.nonterminal_gamma = gamma;
    cfg.classifier = cls;
    const DecodeResult got = decode_single(steered, cfg);
    const BruteBest want = brute_argmax(steered, 3, gamma, cls);
    CHECK(got.score == want.score);
    counts.push_back(count_nonterminal_tokens(got.tokens, cls));
  }
  CHECK(counts.front() == 1);  // unpenalized argmax is "NP"
  CHECK(counts.back() == 0);   // strong penalty prefers "dog"
  for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] <= counts[i - 1]);
}

TEST_CASE("self-ensemble reproduces the single model") {
  const Vocabulary vocab = words_vocab({"a", "b", "c"});
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const RandomTableScorer scorer(vocab, seed);
    DecodeConfig cfg;
    cfg.beam = 8;
    cfg.max_len = 6;
    const DecodeResult one = decode_single(scorer, cfg);
    const DecodeResult same = decode_ensemble_same({&scorer}, cfg);
    CHECK(same.tokens == one.tokens);
    CHECK(same.score == one.score);
    CHECK(same.finished == one.finished);
  }
}

TEST_CASE("zero-weighted ensemble members are inert") {
  const Vocabulary vocab = words_vocab({"a", "b", "c"});
  const RandomTableScorer main_model(vocab, 1);
  const RandomTableScorer other(vocab, 2);
  DecodeConfig cfg;
  cfg.beam = 8;
  cfg.max_len = 5;
  const DecodeResult solo = decode_single(main_model, cfg);
  cfg.ensemble_weights = {1.0, 0.0};
  const DecodeResult duo = decode_ensemble_same({&main_model, &other}, cfg);
  CHECK(duo.tokens == solo.tokens);
  CHECK(duo.score == solo.score);

  cfg.ensemble_weights = {1.0};  // count mismatch
  CHECK_THROWS_AS(decode_ensemble_same({&main_model, &other}, cfg), ScorerError);
  CHECK_THROWS_AS(decode_ensemble_same({}, DecodeConfig{}), DecodeError);
}

TEST_CASE("decode configuration is validated") {
  const Vocabulary vocab = words_vocab({"a"});
  const UniformScorer scorer(vocab);
  DecodeConfig cfg;
  cfg.beam = 0;
  CHECK_THROWS_AS(decode_single(scorer, cfg), DecodeError);
  cfg = DecodeConfig{};
  cfg.inner_beam = 0;
  CHECK_THROWS_AS(decode_single(scorer, cfg), DecodeError);
  cfg = DecodeConfig{};
  cfg.max_len = 0;
  CHECK_THROWS_AS(decode_single(scorer, cfg), DecodeError);
  cfg = DecodeConfig{};
  cfg.expansion_cap = 0;
  CHECK_THROWS_AS(decode_single(scorer, cfg), DecodeError);
  cfg = DecodeConfig{};
  cfg.ensemble_weights = {-1.0};
  CHECK_THROWS_AS(decode_single(scorer, cfg), DecodeError);
}

TEST_CASE("constrained decoding yields only well-formed trees") {
  const Vocabulary vocab = words_vocab({"(S", "(NN", ")", "dog"});
  const SymbolClassifier cls({"S", "NN"});
  int finished = 0;
  int unconstrained_bad = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomTableScorer scorer(vocab, seed);
    DecodeConfig cfg;
    cfg.beam = 8;
    cfg.max_len = 12;
    cfg.kind = TokenKind::LinearTree;
    cfg.classifier = cls;

    cfg.constrain_wellformed = true;
    const DecodeResult good = decode_single(scorer, cfg);
    CHECK(good.mask_blocked > 0);
    if (good.finished) {
      ++finished;
      CHECK_NOTHROW(delinearize_tree(good.tokens));
    }

    cfg.constrain_wellformed = false;
    const DecodeResult free_run = decode_single(scorer, cfg);
    CHECK(free_run.mask_blocked == 0);
    bool ok = free_run.finished;
    if (ok) {
      try {
        delinearize_tree(free_run.tokens);
      } catch (const TreeError&) {
        ok = false;
      }
    }
    if (!ok) ++unconstrained_bad;
  }
  CHECK(finished > 0);
  CHECK(unconstrained_bad > 0);
}

TEST_CASE("constrained derivations parse back into trees") {
  const Vocabulary vocab = words_vocab({"S</R>", "NN</R>", "NP", "dog"});
  const SymbolClassifier cls({"S", "NN", "NP"});
  int finished = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomTableScorer scorer(vocab, seed);
    DecodeConfig cfg;
    cfg.beam = 8;
    cfg.max_len = 10;
    cfg.kind = TokenKind::LinearDerivation;
    cfg.classifier = cls;
    cfg.constrain_wellformed = true;
    const DecodeResult r = decode_single(scorer, cfg);
    if (!r.finished) continue;
    ++finished;
    const Derivation deriv = linear_to_derivation(r.tokens, cls);
    CHECK_NOTHROW(derivation_to_tree(deriv));
  }
  CHECK(finished > 0);
}

TEST_CASE("multi-representation decoding follows the synchronized path") {
  const Tree tree = parse_ptb(kT0);
  const SymbolClassifier cls = testsupport::classifier_for(tree);
  const TokenSeq row4 = derivation_to_linear(tree_to_derivation(tree));

  Vocabulary int_vocab;
  for (const std::string& t : row4.tokens) int_vocab.add(t);
  const MappingTransducer trans = build_syntax_to_plain(int_vocab, cls);

  Vocabulary ext_vocab = words_vocab({"No", "complications", "occurred"});
  const FixedSequenceScorer external(ext_vocab, ids_of(ext_vocab, {"No", "complications",
                                                                   "occurred"}));
  const FixedSequenceScorer internal(int_vocab, ids_of(int_vocab, row4.tokens));

  InternalModel im;
  im.scorer = &internal;
  im.transducer = &trans;
  im.kind = TokenKind::LinearDerivation;

  DecodeConfig cfg;
  cfg.beam = 4;
  cfg.max_len = 16;
  cfg.check_sync = true;
  std::ostringstream trace;
  cfg.trace = &trace;
  const DecodeResult r = decode_multi_rep(external, {im}, cfg);
  CHECK(r.finished);
  CHECK(r.tokens.tokens == std::vector<std::string>{"No", "complications", "occurred"});
  CHECK(r.score == 0.0);
  REQUIRE(r.internal.size() == 1);
  CHECK(r.internal[0].tokens == row4.tokens);
  CHECK(r.internal[0].kind == TokenKind::LinearDerivation);
  REQUIRE(r.internal_scores.size() == 1);
  CHECK(r.internal_scores[0] == 0.0);
  CHECK(r.pruned_dead_lanes == 0);
  CHECK(trace.str().find(" dead=0") != std::string::npos);

  // The per-lane penalty prices the six non-terminal tokens of the derivation.
  DecodeConfig pen = cfg;
  pen.trace = nullptr;
  pen.nonterminal_gamma = -1.0;
  const DecodeResult shifted = decode_multi_rep(external, {im}, pen);
  CHECK(shifted.tokens.tokens == r.tokens.tokens);
  CHECK(shifted.internal_scores[0] == -6.0);
  CHECK(shifted.score == -6.0);
}

TEST_CASE("multi-representation decoding matches the exhaustive oracle") {
  struct Instance {
    std::vector<std::string> ext_words;
    std::vector<std::string> int_tokens;
    SymbolClassifier cls;
    MappingTransducer (*build)(Vocabulary, SymbolClassifier);
    int expansion_cap;
  };
  const std::vector<Instance> instances = {
      {{"x", "y", "z"}, {"S</R>", "x", "y", "z"}, SymbolClassifier(),
       build_syntax_to_plain, 3},
      {{"x", "y", "z"}, {"S</R>", "NP", "x", "y", "z"}, SymbolClassifier({"NP"}),
       build_syntax_to_plain, 2},
      {{"ab", "c"}, {"a@@", "b", "ab", "c"}, SymbolClassifier(), build_word_to_bpe, 3},
  };

  for (std::size_t inst = 0; inst < instances.size(); ++inst) {
    const Instance& inst_case = instances[inst];
    const Vocabulary ext_vocab = words_vocab(inst_case.ext_words);
    const Vocabulary int_vocab = words_vocab(inst_case.int_tokens);
    const MappingTransducer trans = inst_case.build(int_vocab, inst_case.cls);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const RandomTableScorer external(ext_vocab, 31 * inst + seed);
      const RandomTableScorer internal(int_vocab, 1000 + 31 * inst + seed);

      InternalModel im;
      im.scorer = &internal;
      im.transducer = &trans;

      DecodeConfig cfg;
      cfg.beam = 128;
      cfg.inner_beam = 2048;
      cfg.max_len = 4;
      cfg.expansion_cap = inst_case.expansion_cap;
      const DecodeResult beam = decode_multi_rep(external, {im}, cfg);
      const DecodeResult oracle =
          exhaustive_argmax(external, internal, trans, 4, inst_case.expansion_cap);

      CHECK(beam.finished);
      CHECK(beam.tokens.tokens == oracle.tokens.tokens);
      CHECK(beam.score == oracle.score);
      REQUIRE(beam.internal.size() == 1);
      REQUIRE(oracle.internal.size() == 1);
      CHECK(beam.internal[0].tokens == oracle.internal[0].tokens);
      CHECK(beam.internal_scores[0] == oracle.internal_scores[0]);
    }
  }
}

TEST_CASE("dead external tokens are pruned while the rest proceed") {
  const Vocabulary ext_vocab = words_vocab({"x", "q"});
  const Vocabulary int_vocab = words_vocab({"S</R>", "x"});
  const MappingTransducer trans = build_syntax_to_plain(int_vocab, SymbolClassifier());
  const RandomTableScorer external(ext_vocab, 3);
  const RandomTableScorer internal(int_vocab, 4);

  InternalModel im;
  im.scorer = &internal;
  im.transducer = &trans;

  DecodeConfig cfg;
  cfg.beam = 8;
  cfg.max_len = 4;
  const DecodeResult r = decode_multi_rep(external, {im}, cfg);
  CHECK(r.finished);
  CHECK(r.pruned_dead_lanes > 0);  // every "q" extension died
  for (const std::string& tok : r.tokens.tokens) CHECK(tok == "x");
}

TEST_CASE("a fully desynchronized path raises an error") {
  Vocabulary ext_vocab = words_vocab({"q"});
  const Vocabulary int_vocab = words_vocab({"S</R>", "x"});
  const MappingTransducer trans = build_syntax_to_plain(int_vocab, SymbolClassifier());
  const FixedSequenceScorer external(ext_vocab, ids_of(ext_vocab, {"q"}));
  const RandomTableScorer internal(int_vocab, 5);

  InternalModel im;
  im.scorer = &internal;
  im.transducer = &trans;

  DecodeConfig cfg;
  cfg.beam = 4;
  cfg.max_len = 8;
  CHECK_THROWS_WITH_AS(decode_multi_rep(external, {im}, cfg),
                       "no synchronizable path at external position 0", DecodeError);

  CHECK_THROWS_AS(decode_multi_rep(external, {}, cfg), DecodeError);
  InternalModel incomplete;
  CHECK_THROWS_AS(decode_multi_rep(external, {incomplete}, cfg), DecodeError);
  im.scorer = &internal;
  cfg.ensemble_weights = {1.0, 1.0};  // one internal model only
  CHECK_THROWS_AS(decode_multi_rep(external, {im}, cfg), DecodeError);
}

TEST_CASE("multi-representation decoding respects the length budget") {
  Vocabulary ext_vocab = words_vocab({"x"});
  Vocabulary int_vocab = words_vocab({"S</R>", "x"});
  const MappingTransducer trans = build_syntax_to_plain(int_vocab, SymbolClassifier());
  const FixedSequenceScorer external(ext_vocab, ids_of(ext_vocab, {"x", "x", "x"}));
  const UniformScorer internal(int_vocab);

  InternalModel im;
  im.scorer = &internal;
  im.transducer = &trans;

  DecodeConfig cfg;
  cfg.beam = 4;
  cfg.max_len = 3;
  const DecodeResult r = decode_multi_rep(external, {im}, cfg);
  CHECK_FALSE(r.finished);
  CHECK(r.tokens.tokens == std::vector<std::string>{"x", "x"});
  CHECK(r.internal.size() == 1);
}

TEST_CASE("the exhaustive oracle guards its search space") {
  const Vocabulary ext_vocab = words_vocab({"a", "b", "c"});
  const Vocabulary int_vocab = words_vocab({"S</R>", "a", "b", "c"});
  const MappingTransducer trans = build_syntax_to_plain(int_vocab, SymbolClassifier());
  const UniformScorer external(ext_vocab);
  const UniformScorer internal(int_vocab);
  const UniformScorer mismatched(ext_vocab);

  CHECK_THROWS_AS(exhaustive_argmax(external, internal, trans, 0), DecodeError);
  CHECK_THROWS_AS(exhaustive_argmax(external, internal, trans, 10), DecodeError);
  CHECK_THROWS_AS(exhaustive_argmax(external, mismatched, trans, 3), DecodeError);
}

}  // TEST_SUITE
