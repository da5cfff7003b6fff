#ifndef SYNDEC_SYMBOLS_HPP
#define SYNDEC_SYMBOLS_HPP

#include <string>
#include <string_view>
#include <unordered_set>

namespace syndec {

// Reserved markers shared by every representation.
inline constexpr std::string_view kRuleEndMarker = "</R>";
inline constexpr std::string_view kDefaultBpeMarker = "@@";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";

// Coarse token classes. Transducer arcs and decoding constraints are written
// against these classes, so they stay independent of the vocabulary size.
enum class SymbolClass {
  Bos,
  Eos,
  Nonterminal,         // bare label, POS tag, or a linear-tree bracket token
  RuleEndNonterminal,  // label fused with </R>
  TerminalCont,        // subword piece carrying the continuation marker
  Terminal,
};

const char* symbol_class_name(SymbolClass c);

inline bool has_suffix(std::string_view token, std::string_view suffix) {
  return token.size() > suffix.size() &&
         token.substr(token.size() - suffix.size()) == suffix;
}

// Decides class membership from token shape plus a non-terminal label
// inventory. Tokens of the form "(X" and ")" (linearized trees) and "X</R>"
// are recognized by shape alone; bare labels need the inventory.
class SymbolClassifier {
 public:
  SymbolClassifier() = default;
  explicit SymbolClassifier(std::unordered_set<std::string> nonterminals,
                            std::string continuation_marker = std::string(kDefaultBpeMarker));

  SymbolClass classify(std::string_view token) const;
  bool in_inventory(std::string_view label) const;
  const std::unordered_set<std::string>& inventory() const { return nonterminals_; }
  const std::string& continuation_marker() const { return marker_; }

 private:
  std::unordered_set<std::string> nonterminals_;
  std::string marker_ = std::string(kDefaultBpeMarker);
};

}  // namespace syndec

#endif  // SYNDEC_SYMBOLS_HPP
