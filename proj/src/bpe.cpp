#include "syndec/bpe.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace syndec {

namespace {

constexpr std::string_view kWordEnd = "</w>";

// Splits a word into UTF-8 code points plus a trailing </w> symbol.
std::vector<std::string> word_symbols(std::string_view word) {
  std::vector<std::string> syms;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t len = 1;
    unsigned char c = static_cast<unsigned char>(word[i]);
    if ((c & 0x80u) != 0) {
      while (i + len < word.size() &&
             (static_cast<unsigned char>(word[i + len]) & 0xC0u) == 0x80u)
        ++len;
    }
    syms.emplace_back(word.substr(i, len));
    i += len;
  }
  syms.emplace_back(kWordEnd);
  return syms;
}

using Pair = std::pair<std::string, std::string>;

struct PairHash {
  std::size_t operator()(const Pair& p) const {
    std::size_t h = std::hash<std::string>{}(p.first);
    return h * 1000003u ^ std::hash<std::string>{}(p.second);
  }
};

void merge_in_place(std::vector<std::string>& syms, const Pair& pair) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < syms.size();) {
    if (i + 1 < syms.size() && syms[i] == pair.first && syms[i + 1] == pair.second) {
      syms[out++] = pair.first + pair.second;
      i += 2;
    } else {
      if (out != i) syms[out] = std::move(syms[i]);
      ++out;
      ++i;
    }
  }
  syms.resize(out);
}

// Drops the </w> symbol and appends the continuation marker to non-final
// pieces.
std::vector<std::string> finish_pieces(std::vector<std::string> syms,
                                       const std::string& marker) {
  if (!syms.empty() && syms.back() == kWordEnd) {
    syms.pop_back();
  } else if (!syms.empty() && has_suffix(syms.back(), kWordEnd)) {
    syms.back().resize(syms.back().size() - kWordEnd.size());
  }
  for (std::size_t i = 0; i + 1 < syms.size(); ++i) syms[i] += marker;
  return syms;
}

}  // namespace

BpeModel learn_bpe(const std::vector<std::string>& corpus_lines, std::size_t num_merges) {
  std::unordered_map<std::string, std::size_t> word_freq;
  for (const std::string& line : corpus_lines) {
    TokenSeq seq = TokenSeq::split(TokenKind::PlainText, line);
    for (const std::string& w : seq.tokens) ++word_freq[w];
  }
  if (word_freq.empty()) throw BpeError("empty corpus");

  struct Entry {
    std::vector<std::string> syms;
    std::size_t freq;
  };
  std::vector<Entry> entries;
  entries.reserve(word_freq.size());
  for (const auto& [word, freq] : word_freq) entries.push_back({word_symbols(word), freq});
  // Stable order regardless of hash-map iteration: needed only for identical
  // tie handling, and full-scan argmax below already breaks ties by value.

  BpeModel model;
  model.merges.reserve(num_merges);
  for (std::size_t m = 0; m < num_merges; ++m) {
    std::unordered_map<Pair, std::size_t, PairHash> counts;
    for (const Entry& e : entries)
      for (std::size_t i = 0; i + 1 < e.syms.size(); ++i)
        counts[{e.syms[i], e.syms[i + 1]}] += e.freq;
    if (counts.empty()) break;
    const Pair* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [pair, count] : counts) {
      if (count > best_count || (count == best_count && best && pair < *best)) {
        best = &pair;
        best_count = count;
      }
    }
    if (best_count < 2) break;  // nothing left worth merging
    Pair chosen = *best;
    for (Entry& e : entries) merge_in_place(e.syms, chosen);
    model.merges.push_back(std::move(chosen));
  }
  return model;
}

std::vector<std::string> apply_bpe_word(const BpeModel& model, std::string_view word) {
  if (word.empty()) return {};
  std::vector<std::string> syms = word_symbols(word);
  std::unordered_map<Pair, std::size_t, PairHash> rank;
  rank.reserve(model.merges.size());
  for (std::size_t i = 0; i < model.merges.size(); ++i)
    rank.emplace(model.merges[i], i);
  while (syms.size() > 1) {
    std::size_t best_rank = model.merges.size();
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto it = rank.find({syms[i], syms[i + 1]});
      if (it != rank.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == model.merges.size()) break;
    merge_in_place(syms, model.merges[best_rank]);
  }
  return finish_pieces(std::move(syms), model.continuation_marker);
}

TokenSeq apply_bpe(const BpeModel& model, const TokenSeq& seq) {
  TokenSeq out;
  out.kind = seq.kind;
  for (const std::string& w : seq.tokens) {
    std::vector<std::string> pieces = apply_bpe_word(model, w);
    out.tokens.insert(out.tokens.end(), pieces.begin(), pieces.end());
  }
  return out;
}

TokenSeq revert_bpe(const TokenSeq& seq) {
  return revert_bpe(seq, kDefaultBpeMarker);
}

TokenSeq revert_bpe(const TokenSeq& seq, std::string_view marker) {
  TokenSeq out;
  out.kind = TokenKind::PlainText;
  std::string word;
  bool open = false;
  for (const std::string& tok : seq.tokens) {
    if (has_suffix(tok, marker) || tok == marker) {
      word += tok.substr(0, tok.size() - marker.size());
      open = true;
    } else {
      word += tok;
      out.tokens.push_back(std::move(word));
      word.clear();
      open = false;
    }
  }
  if (open)
    throw BpeError("dangling continuation marker at end of sequence: '" + word + "'");
  return out;
}

Tree subword_tree(const BpeModel& model, const Tree& tree) {
  if (tree.is_leaf()) return tree;
  if (tree.is_preterminal()) {
    if (tree.children.size() != 1)
      throw BpeError("preterminal '" + tree.label + "' has " +
                     std::to_string(tree.children.size()) + " leaves, expected one word");
    std::vector<std::string> pieces = apply_bpe_word(model, tree.children[0].token);
    Tree out = Tree::node(tree.label, {});
    out.children.reserve(pieces.size());
    for (std::string& p : pieces) out.children.push_back(Tree::leaf(std::move(p)));
    return out;
  }
  Tree out = Tree::node(tree.label, {});
  out.children.reserve(tree.children.size());
  for (const Tree& c : tree.children) out.children.push_back(subword_tree(model, c));
  return out;
}

void save_bpe(const BpeModel& model, std::ostream& out) {
  out << "bpe v1 marker=" << model.continuation_marker << "\n";
  for (const auto& [l, r] : model.merges) out << l << ' ' << r << "\n";
}

BpeModel load_bpe(std::istream& in) {
  BpeModel model;
  std::string line;
  if (!std::getline(in, line)) throw BpeError("empty merge file");
  const std::string prefix = "bpe v1 marker=";
  if (line.rfind(prefix, 0) != 0)
    throw BpeError("bad merge-file header: '" + line + "'");
  model.continuation_marker = line.substr(prefix.size());
  if (model.continuation_marker.empty()) throw BpeError("empty continuation marker");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string l, r, extra;
    if (!(ls >> l >> r) || (ls >> extra))
      throw BpeError("bad merge line: '" + line + "'");
    model.merges.emplace_back(std::move(l), std::move(r));
  }
  return model;
}

}  // namespace syndec
