#include "syndec/ngram.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace syndec {

namespace {
struct NgramState final : ScorerStateBase {
  std::vector<TokenId> ctx;  // last order-1 ids, <s>-padded
  explicit NgramState(std::vector<TokenId> c) : ctx(std::move(c)) {}
};
}  // namespace

NgramModel::NgramModel(Vocabulary vocab, int order, double k)
    : vocab_(std::move(vocab)), order_(order), k_(k) {
  if (order_ < 1) throw ScorerError("n-gram order must be >= 1");
  if (!(k_ > 0.0)) throw ScorerError("add-k smoothing needs k > 0");
}

ScorerState NgramModel::start() const {
  return std::make_shared<NgramState>(
      std::vector<TokenId>(static_cast<std::size_t>(order_ - 1), Vocabulary::kBosId));
}

const NgramModel::ContextCounts* NgramModel::find_context(
    const std::vector<TokenId>& ctx) const {
  auto it = counts_.find(ctx);
  if (it == counts_.end() || it->second.total == 0) return nullptr;
  return &it->second;
}

std::vector<double> NgramModel::next_log_probs(const ScorerState& state) const {
  const auto& ns = dynamic_cast<const NgramState&>(*state);
  // Back off to the longest context actually observed in training. The empty
  // context is observed whenever any sequence was counted; for a blank model
  // the add-k mass alone yields a uniform distribution.
  const ContextCounts* ctx = nullptr;
  for (std::size_t len = ns.ctx.size();; --len) {
    std::vector<TokenId> key(ns.ctx.end() - static_cast<std::ptrdiff_t>(len), ns.ctx.end());
    ctx = find_context(key);
    if (ctx || len == 0) break;
  }
  static const ContextCounts kEmpty;
  if (!ctx) ctx = &kEmpty;

  const double v = static_cast<double>(vocab_.size());
  const double denom = static_cast<double>(ctx->total) + k_ * v;
  std::vector<double> lp(vocab_.size(), std::log(k_ / denom));
  for (const auto& [tok, cnt] : ctx->by_token)
    lp[static_cast<std::size_t>(tok)] = std::log((static_cast<double>(cnt) + k_) / denom);
  return lp;
}

ScorerState NgramModel::advance(const ScorerState& state, TokenId token) const {
  const auto& ns = dynamic_cast<const NgramState&>(*state);
  std::vector<TokenId> ctx = ns.ctx;
  if (!ctx.empty()) {
    ctx.erase(ctx.begin());
    ctx.push_back(token);
  }
  return std::make_shared<NgramState>(std::move(ctx));
}

void NgramModel::count_sequence(const std::vector<TokenId>& tokens) {
  std::vector<TokenId> padded(static_cast<std::size_t>(order_ - 1), Vocabulary::kBosId);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(Vocabulary::kEosId);
  const std::size_t first_target = static_cast<std::size_t>(order_ - 1);
  for (std::size_t t = first_target; t < padded.size(); ++t) {
    TokenId target = padded[t];
    if (target < 0 || static_cast<std::size_t>(target) >= vocab_.size())
      throw ScorerError("n-gram training token out of vocabulary");
    for (int len = 0; len < order_; ++len) {
      std::vector<TokenId> ctx(padded.begin() + static_cast<std::ptrdiff_t>(t - len),
                               padded.begin() + static_cast<std::ptrdiff_t>(t));
      ContextCounts& c = counts_[ctx];
      c.total += 1;
      c.by_token[target] += 1;
    }
  }
}

void NgramModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ScorerError("cannot write n-gram model: " + path);
  out << "ngram v1\n";
  out << "order " << order_ << "\n";
  std::ostringstream kfmt;
  kfmt.precision(17);
  kfmt << k_;
  out << "k " << kfmt.str() << "\n";
  out << "vocab " << vocab_.size() << "\n";
  for (std::size_t id = 0; id < vocab_.size(); ++id)
    out << vocab_.token(static_cast<TokenId>(id)) << "\t" << id << "\n";
  std::size_t entries = 0;
  for (const auto& [ctx, c] : counts_) entries += c.by_token.size();
  out << "entries " << entries << "\n";
  out.precision(17);
  const double v = static_cast<double>(vocab_.size());
  for (const auto& [ctx, c] : counts_) {
    const double denom = static_cast<double>(c.total) + k_ * v;
    for (const auto& [tok, cnt] : c.by_token) {
      const double lp = std::log((static_cast<double>(cnt) + k_) / denom);
      out << ctx.size();
      for (TokenId id : ctx) out << " " << id;
      out << " " << tok << " " << cnt << " " << lp << "\n";
    }
  }
  if (!out) throw ScorerError("write failed: " + path);
}

NgramModel NgramModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScorerError("cannot read n-gram model: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "ngram v1")
    throw ScorerError("not an n-gram model file: " + path);

  auto expect_field = [&](const std::string& name) {
    if (!std::getline(in, line)) throw ScorerError("truncated n-gram model: " + path);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value) || key != name)
      throw ScorerError("malformed n-gram model header: " + path);
    return value;
  };

  int order = std::stoi(expect_field("order"));
  double k = std::stod(expect_field("k"));
  std::size_t vocab_size = std::stoul(expect_field("vocab"));

  Vocabulary vocab;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (!std::getline(in, line)) throw ScorerError("truncated n-gram model: " + path);
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ScorerError("malformed vocab line: " + line);
    std::string token = line.substr(0, tab);
    TokenId id = vocab.add(token);
    if (id != std::stoi(line.substr(tab + 1)))
      throw ScorerError("vocab ids out of order in: " + path);
  }

  NgramModel model(std::move(vocab), order, k);
  std::size_t entries = std::stoul(expect_field("entries"));
  for (std::size_t i = 0; i < entries; ++i) {
    if (!std::getline(in, line)) throw ScorerError("truncated n-gram model: " + path);
    std::istringstream ls(line);
    std::size_t clen = 0;
    if (!(ls >> clen)) throw ScorerError("malformed n-gram line: " + line);
    std::vector<TokenId> ctx(clen);
    for (std::size_t j = 0; j < clen; ++j)
      if (!(ls >> ctx[j])) throw ScorerError("malformed n-gram line: " + line);
    TokenId tok = 0;
    std::uint64_t cnt = 0;
    double lp = 0.0;  // informational column, counts are authoritative
    if (!(ls >> tok >> cnt >> lp)) throw ScorerError("malformed n-gram line: " + line);
    ContextCounts& c = model.counts_[ctx];
    c.total += cnt;
    c.by_token[tok] += cnt;
  }
  return model;
}

NgramModel train_ngram(const std::vector<std::vector<TokenId>>& corpus, Vocabulary vocab,
                       int order, double k) {
  NgramModel model(std::move(vocab), order, k);
  for (const auto& seq : corpus) model.count_sequence(seq);
  return model;
}

}  // namespace syndec
