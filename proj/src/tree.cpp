#include "syndec/tree.hpp"

#include <sstream>

namespace syndec {

namespace {

std::string at_pos(std::size_t pos) {
  return " at position " + std::to_string(pos);
}

std::string at_token(std::size_t idx) {
  return " at token index " + std::to_string(idx);
}

bool reserved_symbol(std::string_view s) {
  return s == kBosToken || s == kEosToken;
}

void check_symbol_text(const std::string& text, const char* what) {
  if (text.empty()) throw TreeError(std::string("empty ") + what);
  if (text.find(kRuleEndMarker) != std::string::npos)
    throw TreeError(std::string(what) + " '" + text + "' contains reserved marker " +
                    std::string(kRuleEndMarker));
  if (reserved_symbol(text))
    throw TreeError(std::string(what) + " '" + text + "' is a reserved token");
  for (char c : text) {
    if (c == '(' || c == ')' || c == ' ' || c == '\t')
      throw TreeError(std::string(what) + " '" + text + "' contains '" + c + "'");
  }
}

void validate_node(const Tree& t) {
  if (t.is_leaf()) {
    if (!t.children.empty()) throw TreeError("leaf node has children");
    check_symbol_text(t.token, "terminal");
    return;
  }
  if (!t.token.empty()) throw TreeError("internal node carries a terminal token");
  check_symbol_text(t.label, "label");
  if (t.children.empty()) throw TreeError("empty node '" + t.label + "'");
  bool has_leaf = false, has_internal = false;
  for (const Tree& c : t.children) {
    (c.is_leaf() ? has_leaf : has_internal) = true;
    validate_node(c);
  }
  if (has_leaf && has_internal)
    throw TreeError("mixed terminal/non-terminal rule under '" + t.label + "'");
}

}  // namespace

const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::PlainText: return "plain";
    case TokenKind::LinearTree: return "tree";
    case TokenKind::LinearDerivation: return "linder";
    case TokenKind::PosText: return "pos";
  }
  return "?";
}

std::string TokenSeq::str() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

TokenSeq TokenSeq::split(TokenKind kind, std::string_view line) {
  TokenSeq seq;
  seq.kind = kind;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) seq.tokens.emplace_back(line.substr(start, i - start));
  }
  return seq;
}

bool Tree::is_preterminal() const {
  if (is_leaf() || children.empty()) return false;
  for (const Tree& c : children)
    if (!c.is_leaf()) return false;
  return true;
}

Tree Tree::leaf(std::string terminal) {
  Tree t;
  t.token = std::move(terminal);
  return t;
}

Tree Tree::node(std::string label, std::vector<Tree> children) {
  Tree t;
  t.label = std::move(label);
  t.children = std::move(children);
  return t;
}

void validate_tree(const Tree& tree) {
  if (tree.is_leaf()) throw TreeError("root must be an internal node");
  validate_node(tree);
}

Tree parse_ptb(std::string_view text) {
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto read_symbol = [&] {
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '(' &&
           text[i] != ')')
      ++i;
    return std::string(text.substr(start, i - start));
  };

  struct Frame {
    Tree node;
    std::size_t open_pos;
  };
  std::vector<Frame> stack;
  Tree root;
  bool have_root = false;

  skip_space();
  if (i >= text.size() || text[i] != '(')
    throw TreeError("expected '('" + at_pos(i));

  while (true) {
    skip_space();
    if (i >= text.size()) break;
    char c = text[i];
    if (c == '(') {
      if (have_root) throw TreeError("trailing content after tree" + at_pos(i));
      std::size_t open_pos = i;
      ++i;
      skip_space();
      std::string label = read_symbol();
      if (label.empty()) throw TreeError("empty node label" + at_pos(i));
      stack.push_back({Tree::node(std::move(label), {}), open_pos});
    } else if (c == ')') {
      if (stack.empty()) throw TreeError("unbalanced ')'" + at_pos(i));
      ++i;
      Frame done = std::move(stack.back());
      stack.pop_back();
      if (done.node.children.empty())
        throw TreeError("empty node '" + done.node.label + "'" + at_pos(done.open_pos));
      if (stack.empty()) {
        root = std::move(done.node);
        have_root = true;
      } else {
        stack.back().node.children.push_back(std::move(done.node));
      }
    } else {
      if (stack.empty()) throw TreeError("terminal outside brackets" + at_pos(i));
      std::string tok = read_symbol();
      stack.back().node.children.push_back(Tree::leaf(std::move(tok)));
    }
  }
  if (!stack.empty())
    throw TreeError("unbalanced '(': " + std::to_string(stack.size()) +
                    " node(s) left open" + at_pos(text.size()));
  if (!have_root) throw TreeError("no tree found");
  validate_tree(root);
  return root;
}

namespace {

void linearize_into(const Tree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token);
    return;
  }
  out.push_back("(" + t.label);
  for (const Tree& c : t.children) linearize_into(c, out);
  out.push_back(")");
}

}  // namespace

TokenSeq linearize_tree(const Tree& tree) {
  validate_tree(tree);
  TokenSeq seq;
  seq.kind = TokenKind::LinearTree;
  linearize_into(tree, seq.tokens);
  return seq;
}

std::string render_ptb(const Tree& tree) {
  return linearize_tree(tree).str();
}

Tree delinearize_tree(const TokenSeq& seq) {
  if (seq.kind != TokenKind::LinearTree)
    throw TreeError("expected a linearized-tree sequence");
  std::vector<Tree> stack;
  Tree root;
  bool have_root = false;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const std::string& tok = seq.tokens[i];
    if (tok.size() > 1 && tok.front() == '(') {
      if (have_root) throw TreeError("trailing tokens after tree" + at_token(i));
      stack.push_back(Tree::node(tok.substr(1), {}));
    } else if (tok == ")") {
      if (stack.empty()) throw TreeError("unbalanced ')'" + at_token(i));
      Tree done = std::move(stack.back());
      stack.pop_back();
      if (done.children.empty())
        throw TreeError("empty node '" + done.label + "'" + at_token(i));
      if (stack.empty()) {
        root = std::move(done);
        have_root = true;
      } else {
        stack.back().children.push_back(std::move(done));
      }
    } else if (tok == "(") {
      throw TreeError("bare '(' without label" + at_token(i));
    } else {
      if (stack.empty()) throw TreeError("terminal outside brackets" + at_token(i));
      stack.back().children.push_back(Tree::leaf(tok));
    }
  }
  if (!stack.empty())
    throw TreeError("unbalanced sequence: " + std::to_string(stack.size()) +
                    " node(s) left open" + at_token(seq.tokens.size()));
  if (!have_root) throw TreeError("empty sequence");
  validate_tree(root);
  return root;
}

namespace {

void derive_into(const Tree& t, Derivation& d) {
  if (t.is_leaf()) return;
  Rule r;
  r.lhs = t.label;
  for (const Tree& c : t.children) {
    if (c.is_leaf())
      r.rhs.push_back({c.token, true});
    else
      r.rhs.push_back({c.label, false});
  }
  d.rules.push_back(std::move(r));
  for (const Tree& c : t.children) derive_into(c, d);
}

bool rule_is_lexical(const Rule& r) {
  bool any_term = false, any_nt = false;
  for (const RuleSymbol& s : r.rhs) (s.terminal ? any_term : any_nt) = true;
  if (any_term && any_nt)
    throw TreeError("mixed terminal/non-terminal rule under '" + r.lhs + "'");
  if (r.rhs.empty()) throw TreeError("empty rule under '" + r.lhs + "'");
  return any_term;
}

}  // namespace

Derivation tree_to_derivation(const Tree& tree) {
  validate_tree(tree);
  Derivation d;
  derive_into(tree, d);
  return d;
}

Tree derivation_to_tree(const Derivation& deriv) {
  if (deriv.rules.empty()) throw TreeError("empty derivation");
  Tree root = Tree::node(deriv.rules.front().lhs, {});
  // Leftmost pending non-terminals, top of the stack first. Each node's child
  // vector is filled exactly once, so pointers to the children stay valid.
  std::vector<Tree*> pending = {&root};
  for (std::size_t ri = 0; ri < deriv.rules.size(); ++ri) {
    const Rule& r = deriv.rules[ri];
    if (pending.empty())
      throw TreeError("rule " + std::to_string(ri) + " has no pending non-terminal");
    Tree* node = pending.back();
    pending.pop_back();
    if (node->label != r.lhs)
      throw TreeError("rule " + std::to_string(ri) + " lhs '" + r.lhs +
                      "' does not match leftmost pending '" + node->label + "'");
    bool lexical = rule_is_lexical(r);
    node->children.reserve(r.rhs.size());
    for (const RuleSymbol& s : r.rhs)
      node->children.push_back(lexical ? Tree::leaf(s.text) : Tree::node(s.text, {}));
    if (!lexical) {
      for (std::size_t k = r.rhs.size(); k-- > 0;)
        pending.push_back(&node->children[k]);
    }
  }
  if (!pending.empty())
    throw TreeError("derivation ends with " + std::to_string(pending.size()) +
                    " unexpanded non-terminal(s)");
  validate_tree(root);
  return root;
}

std::string derivation_to_text(const Derivation& deriv) {
  if (deriv.rules.empty()) throw TreeError("empty derivation");
  std::string out;
  for (std::size_t i = 0; i < deriv.rules.size(); ++i) {
    const Rule& r = deriv.rules[i];
    if (r.lhs == ";" || r.lhs == "->")
      throw TreeError("unrenderable rule head '" + r.lhs + "'");
    if (i > 0) out += " ; ";
    out += r.lhs;
    out += " ->";
    for (const RuleSymbol& s : r.rhs) {
      if (s.text == "->") throw TreeError("unrenderable symbol '->'");
      out += ' ';
      out += s.text;
    }
  }
  return out;
}

Derivation text_to_derivation(std::string_view line) {
  const std::vector<std::string> toks = TokenSeq::split(TokenKind::PlainText, line).tokens;
  struct RawRule {
    std::string lhs;
    std::vector<std::string> rhs;
  };
  std::vector<RawRule> raw;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (i + 1 >= toks.size() || toks[i + 1] != "->")
      throw TreeError("expected 'LHS ->' at token " + std::to_string(i + 1));
    RawRule rule;
    rule.lhs = toks[i];
    i += 2;
    // The right-hand side runs until a ';' introducing the next rule head;
    // a ';' with no 'X ->' behind it is an ordinary word.
    while (i < toks.size()) {
      if (toks[i] == ";" && i + 2 < toks.size() && toks[i + 2] == "->") {
        ++i;
        break;
      }
      rule.rhs.push_back(toks[i]);
      ++i;
    }
    if (rule.rhs.empty()) throw TreeError("empty right-hand side under '" + rule.lhs + "'");
    raw.push_back(std::move(rule));
  }
  if (raw.empty()) throw TreeError("empty derivation line");
  // In a leftmost derivation a rule rewrites to non-terminals exactly when
  // the next rule expands its first right-hand-side symbol.
  Derivation deriv;
  for (std::size_t r = 0; r < raw.size(); ++r) {
    const bool lexical = r + 1 >= raw.size() || raw[r + 1].lhs != raw[r].rhs.front();
    Rule rule;
    rule.lhs = std::move(raw[r].lhs);
    rule.rhs.reserve(raw[r].rhs.size());
    for (std::string& sym : raw[r].rhs) rule.rhs.push_back({std::move(sym), lexical});
    deriv.rules.push_back(std::move(rule));
  }
  const Tree replay = derivation_to_tree(deriv);
  if (tree_to_derivation(replay) != deriv) throw TreeError("ambiguous derivation line");
  return deriv;
}

TokenSeq derivation_to_linear(const Derivation& deriv) {
  if (deriv.rules.empty()) throw TreeError("empty derivation");
  TokenSeq seq;
  seq.kind = TokenKind::LinearDerivation;
  for (const Rule& r : deriv.rules) {
    bool lexical = rule_is_lexical(r);
    for (std::size_t k = 0; k < r.rhs.size(); ++k) {
      const RuleSymbol& s = r.rhs[k];
      if (lexical)
        seq.tokens.push_back(s.text);
      else if (k + 1 == r.rhs.size())
        seq.tokens.push_back(s.text + std::string(kRuleEndMarker));
      else
        seq.tokens.push_back(s.text);
    }
  }
  return seq;
}

Derivation linear_to_derivation(const TokenSeq& seq, const SymbolClassifier& classifier,
                                std::string_view root) {
  if (seq.kind != TokenKind::LinearDerivation)
    throw TreeError("expected a linearized-derivation sequence");
  Derivation d;
  std::vector<std::string> pending = {std::string(root)};
  std::size_t i = 0;
  const std::vector<std::string>& toks = seq.tokens;

  auto strip_rule_end = [](const std::string& tok) {
    return tok.substr(0, tok.size() - kRuleEndMarker.size());
  };

  while (!pending.empty()) {
    Rule r;
    r.lhs = pending.back();
    pending.pop_back();
    if (i >= toks.size())
      throw TreeError("premature end of sequence while expanding '" + r.lhs + "'" +
                      at_token(i));
    SymbolClass first = classifier.classify(toks[i]);
    if (first == SymbolClass::Nonterminal || first == SymbolClass::RuleEndNonterminal) {
      // Non-terminal rule body: everything through the first </R>-fused token.
      while (true) {
        if (i >= toks.size())
          throw TreeError("premature end of sequence: rule body of '" + r.lhs +
                          "' lacks a " + std::string(kRuleEndMarker) + " token" +
                          at_token(i));
        SymbolClass c = classifier.classify(toks[i]);
        if (c == SymbolClass::RuleEndNonterminal) {
          r.rhs.push_back({strip_rule_end(toks[i]), false});
          ++i;
          break;
        }
        if (c != SymbolClass::Nonterminal)
          throw TreeError("terminal '" + toks[i] + "' inside the non-terminal rule body of '" +
                          r.lhs + "'" + at_token(i));
        r.rhs.push_back({toks[i], false});
        ++i;
      }
      for (std::size_t k = r.rhs.size(); k-- > 0;) pending.push_back(r.rhs[k].text);
    } else if (first == SymbolClass::Terminal || first == SymbolClass::TerminalCont) {
      // Lexical rule body: a maximal one-word subword run, all pieces but the
      // last carrying the continuation marker.
      while (true) {
        if (i >= toks.size())
          throw TreeError("premature end of sequence: dangling continuation under '" +
                          r.lhs + "'" + at_token(i));
        SymbolClass c = classifier.classify(toks[i]);
        if (c == SymbolClass::TerminalCont) {
          r.rhs.push_back({toks[i], true});
          ++i;
          continue;
        }
        if (c != SymbolClass::Terminal)
          throw TreeError("non-terminal '" + toks[i] + "' inside the subword run of '" +
                          r.lhs + "'" + at_token(i));
        r.rhs.push_back({toks[i], true});
        ++i;
        break;
      }
    } else {
      throw TreeError("reserved token '" + toks[i] + "'" + at_token(i));
    }
    d.rules.push_back(std::move(r));
  }
  if (i < toks.size())
    throw TreeError("leftover tokens after derivation completed" + at_token(i));
  return d;
}

namespace {

void pos_text_into(const Tree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) return;
  if (t.is_preterminal()) {
    out.push_back(t.label);
    for (const Tree& c : t.children) out.push_back(c.token);
    return;
  }
  for (const Tree& c : t.children) pos_text_into(c, out);
}

void plain_into(const Tree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token);
    return;
  }
  for (const Tree& c : t.children) plain_into(c, out);
}

}  // namespace

TokenSeq tree_to_pos_text(const Tree& tree) {
  validate_tree(tree);
  TokenSeq seq;
  seq.kind = TokenKind::PosText;
  pos_text_into(tree, seq.tokens);
  return seq;
}

TokenSeq tree_to_plain(const Tree& tree) {
  validate_tree(tree);
  TokenSeq seq;
  seq.kind = TokenKind::PlainText;
  plain_into(tree, seq.tokens);
  return seq;
}

namespace {

void count_into(const Tree& t, TreeCounts& c) {
  if (t.is_leaf()) {
    ++c.leaves;
    return;
  }
  ++c.internal_nodes;
  if (t.is_preterminal()) ++c.preterminals;
  for (const Tree& ch : t.children) count_into(ch, c);
}

}  // namespace

TreeCounts count_nodes(const Tree& tree) {
  TreeCounts c;
  count_into(tree, c);
  return c;
}

void collect_labels(const Tree& tree, std::unordered_set<std::string>& out) {
  if (tree.is_leaf()) return;
  out.insert(tree.label);
  for (const Tree& c : tree.children) collect_labels(c, out);
}

}  // namespace syndec
