#ifndef SYNDEC_TOY_MODEL_HPP
#define SYNDEC_TOY_MODEL_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "syndec/scorer.hpp"
#include "syndec/vocab.hpp"

namespace syndec {

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-cell tanh recurrent language model with a flat parameter vector.
// Blocks, in order: embeddings V*d, input weights d*d, recurrent weights d*d,
// hidden bias d, output projection d*V, output bias V.
//   h_t = tanh(Wx e(x_t) + Wh h_{t-1} + b),  logits_t = Wout^T h_t + bo
// Inputs are <s>, tokens[0..L-1]; targets are tokens[0..L-1], </s>.
struct ToyModel {
  Vocabulary vocab;
  int hidden = 0;
  std::vector<double> w;

  std::size_t vsize() const { return vocab.size(); }
  std::size_t d() const { return static_cast<std::size_t>(hidden); }
  std::size_t emb_off() const { return 0; }
  std::size_t wx_off() const { return vsize() * d(); }
  std::size_t wh_off() const { return wx_off() + d() * d(); }
  std::size_t b_off() const { return wh_off() + d() * d(); }
  std::size_t wout_off() const { return b_off() + d(); }
  std::size_t bo_off() const { return wout_off() + d() * vsize(); }
  std::size_t n_params() const { return bo_off() + vsize(); }

  static ToyModel init(Vocabulary vocab, int hidden, std::uint64_t seed);

  void save(const std::string& path) const;
  static ToyModel load(const std::string& path);
};

// Uniform draw in [0,1) built from raw mt19937_64 output; identical across
// platforms, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LossStats {
  double loss = 0.0;         // summed negative log-likelihood
  std::size_t tokens = 0;    // target tokens (sequence tokens plus </s>)
};

// Summed NLL of one sequence; when grad is non-null, the loss gradient is
// ADDED into it (callers accumulate many sequences into one buffer).
double sequence_loss(const ToyModel& model, std::span<const TokenId> tokens,
                     std::vector<double>* grad = nullptr);

LossStats forward_loss(const ToyModel& model, const std::vector<std::vector<TokenId>>& batch);

// Adds the batch gradient (summed-loss) into grad, sequence by sequence.
LossStats add_gradient(const ToyModel& model, const std::vector<std::vector<TokenId>>& batch,
                       std::vector<double>& grad);

std::vector<double> backward(const ToyModel& model,
                             const std::vector<std::vector<TokenId>>& batch);

class ToyScorer final : public SequenceScorer {
 public:
  explicit ToyScorer(ToyModel model);
  const Vocabulary& vocab() const override { return model_.vocab; }
  ScorerState start() const override;
  std::vector<double> next_log_probs(const ScorerState& state) const override;
  ScorerState advance(const ScorerState& state, TokenId token) const override;
  const ToyModel& model() const { return model_; }

 private:
  ToyModel model_;
};

}  // namespace syndec

#endif  // SYNDEC_TOY_MODEL_HPP
