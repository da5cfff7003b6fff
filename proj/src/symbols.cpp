#include "syndec/symbols.hpp"

namespace syndec {

const char* symbol_class_name(SymbolClass c) {
  switch (c) {
    case SymbolClass::Bos: return "BOS";
    case SymbolClass::Eos: return "EOS";
    case SymbolClass::Nonterminal: return "NONTERMINAL";
    case SymbolClass::RuleEndNonterminal: return "RULE_END_NONTERMINAL";
    case SymbolClass::TerminalCont: return "TERMINAL_CONT";
    case SymbolClass::Terminal: return "TERMINAL";
  }
  return "?";
}

SymbolClassifier::SymbolClassifier(std::unordered_set<std::string> nonterminals,
                                   std::string continuation_marker)
    : nonterminals_(std::move(nonterminals)), marker_(std::move(continuation_marker)) {}

bool SymbolClassifier::in_inventory(std::string_view label) const {
  return nonterminals_.count(std::string(label)) > 0;
}

SymbolClass SymbolClassifier::classify(std::string_view token) const {
  if (token == kBosToken) return SymbolClass::Bos;
  if (token == kEosToken) return SymbolClass::Eos;
  if (has_suffix(token, kRuleEndMarker)) return SymbolClass::RuleEndNonterminal;
  if (!token.empty() && token.front() == '(') return SymbolClass::Nonterminal;
  if (token == ")") return SymbolClass::Nonterminal;
  if (in_inventory(token)) return SymbolClass::Nonterminal;
  if (has_suffix(token, marker_)) return SymbolClass::TerminalCont;
  return SymbolClass::Terminal;
}

}  // namespace syndec
