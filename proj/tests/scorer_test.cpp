#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/random_trees.hpp"
#include "syndec/scorer.hpp"

using namespace syndec;

namespace {

Vocabulary small_vocab() {
  Vocabulary vocab;
  vocab.add("a");
  vocab.add("b");
  return vocab;  // <s> </s> a b
}

double log_sum_exp(const std::vector<double>& lp) {
  double mx = lp[0];
  for (double v : lp) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : lp) sum += std::exp(v - mx);
  return mx + std::log(sum);
}

}  // namespace

TEST_SUITE("scorer") {

TEST_CASE("uniform scorer spreads mass over the full vocabulary") {
  const UniformScorer scorer(small_vocab());
  const std::vector<double> lp = scorer.next_log_probs(scorer.start());
  REQUIRE(lp.size() == 4);
  for (double v : lp) CHECK(v == doctest::Approx(std::log(0.25)).epsilon(1e-12));
  CHECK(log_sum_exp(lp) == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<TokenId> seq = {2, 3, 2};
  CHECK(sequence_log_prob(scorer, seq) == doctest::Approx(4 * std::log(0.25)));
  CHECK(prefix_log_prob(scorer, seq) == doctest::Approx(3 * std::log(0.25)));
}

TEST_CASE("fixed scorer is deterministic on its sequence") {
  const std::vector<TokenId> seq = {2, 2, 3};
  const FixedSequenceScorer scorer(small_vocab(), seq);

  CHECK(sequence_log_prob(scorer, seq) == 0.0);  // probability one throughout

  ScorerState state = scorer.start();
  std::vector<double> lp = scorer.next_log_probs(state);
  CHECK(lp[2] == 0.0);
  CHECK(lp[3] == -std::numeric_limits<double>::infinity());
  CHECK(lp[Vocabulary::kEosId] == -std::numeric_limits<double>::infinity());

  // diverging from the sequence kills the state for good
  state = scorer.advance(state, 3);
  lp = scorer.next_log_probs(state);
  for (double v : lp) CHECK(v == -std::numeric_limits<double>::infinity());

  const std::vector<TokenId> other = {2, 3};
  CHECK(sequence_log_prob(scorer, other) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("nonterminal penalty shifts only non-terminal scores") {
  Vocabulary vocab;
  vocab.add("A");
  vocab.add("B</R>");
  vocab.add("x");
  vocab.add("y@@");
  const SymbolClassifier classifier(std::unordered_set<std::string>{"A", "B"});
  const UniformScorer base(vocab);
  const NonterminalPenaltyScorer penalized = with_nonterminal_penalty(base, -1.5, classifier);

  const std::vector<double> raw = base.next_log_probs(base.start());
  const std::vector<double> lp = penalized.next_log_probs(penalized.start());
  CHECK(lp[vocab.require("A")] == raw[vocab.require("A")] - 1.5);
  CHECK(lp[vocab.require("B</R>")] == raw[vocab.require("B</R>")] - 1.5);
  CHECK(lp[vocab.require("x")] == raw[vocab.require("x")]);
  CHECK(lp[vocab.require("y@@")] == raw[vocab.require("y@@")]);
  CHECK(lp[Vocabulary::kBosId] == raw[Vocabulary::kBosId]);
  CHECK(lp[Vocabulary::kEosId] == raw[Vocabulary::kEosId]);

  CHECK_THROWS_AS(with_nonterminal_penalty(base, 0.5, classifier), ScorerError);

  const NonterminalPenaltyScorer zero = with_nonterminal_penalty(base, 0.0, classifier);
  CHECK(zero.next_log_probs(zero.start()) == raw);
}

TEST_CASE("log-linear ensemble sums weighted member scores") {
  const Vocabulary vocab = small_vocab();
  const UniformScorer uniform(vocab);
  const FixedSequenceScorer fixed(vocab, {2});
  const std::vector<const SequenceScorer*> members = {&uniform, &fixed};

  const LogLinearEnsemble both = log_linear_ensemble(members);
  std::vector<double> lp = both.next_log_probs(both.start());
  CHECK(lp[2] == doctest::Approx(std::log(0.25) + 0.0));
  CHECK(lp[3] == -std::numeric_limits<double>::infinity());

  const LogLinearEnsemble halved = log_linear_ensemble(members, {0.5, 1.0});
  lp = halved.next_log_probs(halved.start());
  CHECK(lp[2] == doctest::Approx(0.5 * std::log(0.25)));

  // zero weight removes a member entirely, -inf included
  const LogLinearEnsemble only_uniform = log_linear_ensemble(members, {1.0, 0.0});
  lp = only_uniform.next_log_probs(only_uniform.start());
  CHECK(lp == uniform.next_log_probs(uniform.start()));
}

TEST_CASE("ensemble construction is validated") {
  const Vocabulary vocab = small_vocab();
  Vocabulary other = small_vocab();
  other.add("c");
  const UniformScorer a(vocab);
  const UniformScorer b(other);

  CHECK_THROWS_AS(log_linear_ensemble({}), ScorerError);
  CHECK_THROWS_AS(log_linear_ensemble({&a, &b}), ScorerError);
  CHECK_THROWS_AS(log_linear_ensemble({&a}, {1.0, 2.0}), ScorerError);
  CHECK_THROWS_AS(log_linear_ensemble({&a}, {-0.5}), ScorerError);
}

TEST_CASE("ensemble advances member states together") {
  const Vocabulary vocab = small_vocab();
  const FixedSequenceScorer fixed(vocab, {2, 3});
  const UniformScorer uniform(vocab);
  const LogLinearEnsemble ensemble = log_linear_ensemble({&fixed, &uniform});

  ScorerState state = ensemble.start();
  state = ensemble.advance(state, 2);
  const std::vector<double> lp = ensemble.next_log_probs(state);
  CHECK(lp[3] == doctest::Approx(0.0 + std::log(0.25)));
  CHECK(lp[2] == -std::numeric_limits<double>::infinity());
}

TEST_CASE("random table scorer is a normalized deterministic backend") {
  Vocabulary vocab = small_vocab();
  vocab.add("c");
  const testsupport::RandomTableScorer scorer(vocab, 99);
  const testsupport::RandomTableScorer twin(vocab, 99);
  const testsupport::RandomTableScorer other(vocab, 100);

  ScorerState s = scorer.start();
  CHECK(scorer.next_log_probs(s) == twin.next_log_probs(twin.start()));
  CHECK(scorer.next_log_probs(s) != other.next_log_probs(other.start()));
  CHECK(log_sum_exp(scorer.next_log_probs(s)) == doctest::Approx(0.0).epsilon(1e-12));

  const ScorerState after_a = scorer.advance(s, 2);
  const ScorerState after_b = scorer.advance(s, 3);
  CHECK(scorer.next_log_probs(after_a) != scorer.next_log_probs(after_b));
  CHECK(log_sum_exp(scorer.next_log_probs(after_a)) == doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
