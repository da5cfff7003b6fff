#ifndef SYNDEC_TREE_HPP
#define SYNDEC_TREE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "syndec/symbols.hpp"

namespace syndec {

enum class TokenKind { PlainText, LinearTree, LinearDerivation, PosText };

const char* token_kind_name(TokenKind k);

// A flat token sequence tagged with the representation it encodes.
struct TokenSeq {
  TokenKind kind = TokenKind::PlainText;
  std::vector<std::string> tokens;

  std::string str() const;  // tokens joined by single spaces
  static TokenSeq split(TokenKind kind, std::string_view line);

  bool operator==(const TokenSeq&) const = default;
};

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constituency tree node. Internal nodes carry a label and >= 1 children;
// leaves carry one terminal token and no label. A preterminal is an internal
// node whose children are all leaves; mixed rules are rejected at ingestion.
struct Tree {
  std::string label;
  std::string token;
  std::vector<Tree> children;

  bool is_leaf() const { return label.empty(); }
  bool is_preterminal() const;

  static Tree leaf(std::string terminal);
  static Tree node(std::string label, std::vector<Tree> children);

  bool operator==(const Tree&) const = default;
};

struct RuleSymbol {
  std::string text;
  bool terminal = false;
  bool operator==(const RuleSymbol&) const = default;
};

struct Rule {
  std::string lhs;
  std::vector<RuleSymbol> rhs;
  bool operator==(const Rule&) const = default;
};

// Leftmost derivation of a tree: rule i's lhs is the leftmost unexpanded
// non-terminal after rules 1..i-1 have been applied.
struct Derivation {
  std::vector<Rule> rules;
  bool operator==(const Derivation&) const = default;
};

// Throws TreeError if any Tree invariant is violated.
void validate_tree(const Tree& tree);

Tree parse_ptb(std::string_view text);
std::string render_ptb(const Tree& tree);

TokenSeq linearize_tree(const Tree& tree);
Tree delinearize_tree(const TokenSeq& seq);

Derivation tree_to_derivation(const Tree& tree);
Tree derivation_to_tree(const Derivation& deriv);

// One-line rendering "LHS -> SYM SYM ; LHS -> SYM ; ...". Symbols equal to
// the arrow token and rule heads equal to the separator are unrenderable.
std::string derivation_to_text(const Derivation& deriv);
// Inverse of derivation_to_text. Terminal/non-terminal status is recovered
// from leftmost-derivation order and verified by replaying the rules; lines
// admitting no consistent reading are rejected.
Derivation text_to_derivation(std::string_view line);

TokenSeq derivation_to_linear(const Derivation& deriv);
Derivation linear_to_derivation(const TokenSeq& seq, const SymbolClassifier& classifier,
                                std::string_view root = "ROOT");

TokenSeq tree_to_pos_text(const Tree& tree);
TokenSeq tree_to_plain(const Tree& tree);

struct TreeCounts {
  std::size_t internal_nodes = 0;
  std::size_t preterminals = 0;
  std::size_t leaves = 0;
};
TreeCounts count_nodes(const Tree& tree);

// Collects every internal-node label (phrase labels and POS tags).
void collect_labels(const Tree& tree, std::unordered_set<std::string>& out);

}  // namespace syndec

#endif  // SYNDEC_TREE_HPP
