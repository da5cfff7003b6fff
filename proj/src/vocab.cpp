#include "syndec/vocab.hpp"

#include <istream>
#include <ostream>

#include "syndec/symbols.hpp"

namespace syndec {

Vocabulary::Vocabulary() {
  add(kBosToken);
  add(kEosToken);
}

TokenId Vocabulary::add(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  TokenId id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::require(std::string_view token) const {
  auto id = find(token);
  if (!id) throw VocabError("token '" + std::string(token) + "' not in vocabulary");
  return *id;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw VocabError("token id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

Vocabulary Vocabulary::from_corpus(const std::vector<TokenSeq>& corpus) {
  Vocabulary v;
  for (const TokenSeq& seq : corpus)
    for (const std::string& tok : seq.tokens) v.add(tok);
  return v;
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << '\t' << i << "\n";
}

Vocabulary Vocabulary::load(std::istream& in) {
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw VocabError("bad vocabulary line: '" + line + "'");
    std::string tok = line.substr(0, tab);
    TokenId id = static_cast<TokenId>(std::stol(line.substr(tab + 1)));
    TokenId got = v.add(tok);
    if (got != id)
      throw VocabError("vocabulary ids out of order: token '" + tok + "' expected id " +
                       std::to_string(got) + ", file says " + std::to_string(id));
  }
  return v;
}

std::vector<TokenId> to_ids(const Vocabulary& vocab, const TokenSeq& seq) {
  std::vector<TokenId> ids;
  ids.reserve(seq.tokens.size());
  for (const std::string& tok : seq.tokens) ids.push_back(vocab.require(tok));
  return ids;
}

TokenSeq to_tokens(const Vocabulary& vocab, const std::vector<TokenId>& ids, TokenKind kind) {
  TokenSeq seq;
  seq.kind = kind;
  seq.tokens.reserve(ids.size());
  for (TokenId id : ids) seq.tokens.push_back(vocab.token(id));
  return seq;
}

}  // namespace syndec
