#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/random_trees.hpp"
#include "syndec/bpe.hpp"
#include "syndec/tree.hpp"

using namespace syndec;

namespace {

const std::vector<std::string> kLowCorpus = {"low low low lower lower"};

std::string pieces_joined(const std::vector<std::string>& pieces) {
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) out += ' ';
    out += pieces[i];
  }
  return out;
}

}  // namespace

TEST_SUITE("bpe") {

TEST_CASE("pair counting learns the expected merges") {
  const BpeModel model = learn_bpe(kLowCorpus, 2);
  REQUIRE(model.merges.size() == 2);
  CHECK(model.merges[0] == std::pair<std::string, std::string>{"l", "o"});
  CHECK(model.merges[1] == std::pair<std::string, std::string>{"lo", "w"});
}

TEST_CASE("learning is deterministic") {
  const BpeModel a = learn_bpe(kLowCorpus, 8);
  const BpeModel b = learn_bpe(kLowCorpus, 8);
  CHECK(a.merges == b.merges);
}

TEST_CASE("zero merges split words into code points") {
  const BpeModel model = learn_bpe({"abc"}, 0);
  CHECK(model.merges.empty());
  CHECK(apply_bpe_word(model, "abc") == std::vector<std::string>{"a@@", "b@@", "c"});
  CHECK(apply_bpe_word(model, "x") == std::vector<std::string>{"x"});
}

TEST_CASE("multi-byte code points are never split") {
  const BpeModel model = learn_bpe({"abc"}, 0);
  CHECK(apply_bpe_word(model, "caf\xc3\xa9") ==
        std::vector<std::string>{"c@@", "a@@", "f@@", "\xc3\xa9"});
}

TEST_CASE("greedy application follows merge order") {
  const BpeModel model = learn_bpe(kLowCorpus, 2);
  CHECK(pieces_joined(apply_bpe_word(model, "lowest")) == "low@@ e@@ s@@ t");
  CHECK(apply_bpe_word(model, "low") == std::vector<std::string>{"low"});
}

TEST_CASE("segmentation partitions the word") {
  const BpeModel model = learn_bpe(kLowCorpus, 3);
  for (const std::string& word : testsupport::word_pool()) {
    std::string joined;
    for (const std::string& piece : apply_bpe_word(model, word)) {
      if (has_suffix(piece, model.continuation_marker))
        joined += piece.substr(0, piece.size() - model.continuation_marker.size());
      else
        joined += piece;
    }
    CHECK(joined == word);
  }
}

TEST_CASE("apply and revert round-trip") {
  const BpeModel model = learn_bpe({"no complications occurred", "the cat sat nearby"}, 6);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    TokenSeq seq;
    const std::size_t len = 1 + rng() % 8;
    for (std::size_t j = 0; j < len; ++j)
      seq.tokens.push_back(testsupport::pick(rng, testsupport::word_pool()));
    CHECK(revert_bpe(apply_bpe(model, seq)) == seq);
  }
}

TEST_CASE("revert joins marker runs") {
  auto seq = [](const char* line) { return TokenSeq::split(TokenKind::PlainText, line); };
  CHECK(revert_bpe(seq("low@@ er")).str() == "lower");
  CHECK(revert_bpe(seq("No complications occurred")).str() == "No complications occurred");
  CHECK(revert_bpe(revert_bpe(seq("a@@ b c"))) == revert_bpe(seq("a@@ b c")));
  CHECK_THROWS_AS(revert_bpe(seq("low@@")), BpeError);
  CHECK_THROWS_AS(revert_bpe(seq("a b@@ c@@")), BpeError);
}

TEST_CASE("subword trees replace single leaves by piece runs") {
  const BpeModel model = learn_bpe(kLowCorpus, 2);
  const Tree tree = parse_ptb("(ROOT (NN lowest ) )");
  const Tree sub = subword_tree(model, tree);
  REQUIRE(sub.children.size() == 1);
  REQUIRE(sub.children[0].children.size() == 4);
  CHECK(render_ptb(sub) == "(ROOT (NN low@@ e@@ s@@ t ) )");

  const Tree unchanged = subword_tree(model, parse_ptb("(ROOT (NN low ) )"));
  CHECK(unchanged == parse_ptb("(ROOT (NN low ) )"));
}

TEST_CASE("subwording commutes with the plain-text projection") {
  const BpeModel model = learn_bpe({"no complications occurred the cat sat"}, 5);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const Tree tree = testsupport::random_tree(rng);
    CHECK(tree_to_plain(subword_tree(model, tree)) == apply_bpe(model, tree_to_plain(tree)));
  }
}

TEST_CASE("subwording rejects multi-word preterminals") {
  const BpeModel model = learn_bpe({"ab"}, 0);
  const Tree bad = Tree::node("ROOT", {Tree::node("NN", {Tree::leaf("a"), Tree::leaf("b")})});
  CHECK_THROWS_AS(subword_tree(model, bad), BpeError);
}

TEST_CASE("vocabulary growth is bounded by merges") {
  const std::vector<std::string> corpus = {"the cat sat on the mat", "the dog sat nearby"};
  const BpeModel model = learn_bpe(corpus, 10);
  std::unordered_set<std::string> chars;
  std::unordered_set<std::string> pieces;
  for (const std::string& line : corpus) {
    for (const std::string& word : TokenSeq::split(TokenKind::PlainText, line).tokens) {
      for (char c : word) chars.insert(std::string(1, c));
      for (const std::string& piece : apply_bpe_word(model, word)) pieces.insert(piece);
    }
  }
  // Marker variants can double-count a symbol, hence the factor of two.
  CHECK(pieces.size() <= 2 * (chars.size() + model.merges.size()));
}

TEST_CASE("save and load round-trip") {
  const BpeModel model = learn_bpe(kLowCorpus, 4);
  std::stringstream buffer;
  save_bpe(model, buffer);
  const BpeModel loaded = load_bpe(buffer);
  CHECK(loaded.merges == model.merges);
  CHECK(loaded.continuation_marker == model.continuation_marker);

  std::stringstream bad("not a merge file\n");
  CHECK_THROWS_AS(load_bpe(bad), BpeError);
}

}  // TEST_SUITE
