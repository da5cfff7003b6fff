#ifndef SYNDEC_BPE_HPP
#define SYNDEC_BPE_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "syndec/tree.hpp"

namespace syndec {

class BpeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered byte-pair merge list. Merge symbols may contain the end-of-word
// symbol </w> as their final characters; learned order is the application
// priority.
struct BpeModel {
  std::vector<std::pair<std::string, std::string>> merges;
  std::string continuation_marker = std::string(kDefaultBpeMarker);
};

// Learns up to num_merges merges over word-internal symbol pairs. Words are
// split into UTF-8 code points followed by a separate </w> symbol. Ties in
// pair frequency break lexicographically on (left, right).
BpeModel learn_bpe(const std::vector<std::string>& corpus_lines, std::size_t num_merges);

// Segments one word; non-final pieces carry the continuation marker.
std::vector<std::string> apply_bpe_word(const BpeModel& model, std::string_view word);

TokenSeq apply_bpe(const BpeModel& model, const TokenSeq& seq);

// Joins marker-carrying tokens with their successors. Idempotent on
// marker-free text; a dangling marker at the end of the sequence is an error.
TokenSeq revert_bpe(const TokenSeq& seq);
TokenSeq revert_bpe(const TokenSeq& seq, std::string_view marker);

// Replaces each preterminal's single word leaf by its subword pieces.
Tree subword_tree(const BpeModel& model, const Tree& tree);

void save_bpe(const BpeModel& model, std::ostream& out);
BpeModel load_bpe(std::istream& in);

}  // namespace syndec

#endif  // SYNDEC_BPE_HPP
