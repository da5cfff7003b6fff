#ifndef SYNDEC_VOCAB_HPP
#define SYNDEC_VOCAB_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "syndec/tree.hpp"

namespace syndec {

using TokenId = std::int32_t;

class VocabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Token <-> id map. Ids 0 and 1 are always <s> and </s>; further tokens get
// ids in insertion order.
class Vocabulary {
 public:
  static constexpr TokenId kBosId = 0;
  static constexpr TokenId kEosId = 1;

  Vocabulary();

  TokenId add(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  TokenId require(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const { return tokens_.size(); }

  // Tokens in first-occurrence order, reserved symbols first.
  static Vocabulary from_corpus(const std::vector<TokenSeq>& corpus);

  void save(std::ostream& out) const;  // one "token<TAB>id" line per token
  static Vocabulary load(std::istream& in);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

std::vector<TokenId> to_ids(const Vocabulary& vocab, const TokenSeq& seq);
TokenSeq to_tokens(const Vocabulary& vocab, const std::vector<TokenId>& ids,
                   TokenKind kind = TokenKind::PlainText);

}  // namespace syndec

#endif  // SYNDEC_VOCAB_HPP
