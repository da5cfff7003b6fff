#ifndef SYNDEC_TRAINER_HPP
#define SYNDEC_TRAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "syndec/toy_model.hpp"

namespace syndec {

struct TrainConfig {
  int hidden = 16;
  std::size_t batch_size_tokens = 4096;  // padded token budget per batch
  int batches_per_update = 1;            // delayed-SGD accumulation window
  double learning_rate = 0.1;
  int max_steps = 100;  // parameter updates; batches are cycled as needed
  std::uint64_t seed = 1;
  int checkpoint_every = 0;  // updates between checkpoints; 0 keeps only the final one
  int average_last = 1;      // trailing checkpoints averaged into the returned model
};

void validate(const TrainConfig& config);

// Greedy length-bucketed batching: sequences are stably sorted by length and
// packed while max_len * n_sequences stays within the budget, so longer
// sequences yield batches with fewer of them. Returns corpus indices.
std::vector<std::vector<std::size_t>> batch_corpus(
    const std::vector<std::vector<TokenId>>& corpus, std::size_t batch_size_tokens);

// Sums per-sequence gradients of the summed loss into one buffer, in batch
// order, so accumulating K batches is bit-identical to one pass over their
// concatenation. The SGD step divides by the accumulated target-token count.
class GradientAccumulator {
 public:
  explicit GradientAccumulator(std::size_t n_params);

  void add_batch(const ToyModel& model, const std::vector<std::vector<TokenId>>& batch);
  void apply_update(ToyModel& model, double learning_rate);  // resets afterwards
  void reset();

  const std::vector<double>& gradient() const { return grad_; }
  double loss() const { return loss_; }
  std::size_t token_count() const { return tokens_; }
  std::size_t batches_seen() const { return batch_norms_.size(); }
  double grad_norm() const;
  double batch_norm_variance() const;

 private:
  std::vector<double> grad_;
  std::vector<double> batch_norms_;
  double loss_ = 0.0;
  std::size_t tokens_ = 0;
};

struct UpdateStats {
  int update = 0;
  std::size_t batches = 0;
  std::size_t tokens = 0;
  double loss_per_token = 0.0;
  double grad_norm = 0.0;
  double grad_norm_var = 0.0;
};

std::ostream& operator<<(std::ostream& out, const UpdateStats& stats);

// One pass over the given batches with batches_per_update accumulation;
// ceil(batches / batches_per_update) updates in total.
ToyModel accumulate_and_update(ToyModel model, const std::vector<std::vector<TokenId>>& corpus,
                               const std::vector<std::vector<std::size_t>>& batches,
                               const TrainConfig& config,
                               std::vector<UpdateStats>* log = nullptr);

struct TrainResult {
  ToyModel model;  // trailing-checkpoint average
  std::vector<ToyModel> checkpoints;
  std::vector<UpdateStats> log;

  ToyScorer scorer() const { return ToyScorer(model); }
};

TrainResult train(const std::vector<std::vector<TokenId>>& corpus, Vocabulary vocab,
                  const TrainConfig& config, std::ostream* log_stream = nullptr);

ToyModel average_checkpoints(const std::vector<ToyModel>& checkpoints);

// Mean negative log-likelihood per target token.
double evaluate_loss(const ToyModel& model, const std::vector<std::vector<TokenId>>& corpus);

}  // namespace syndec

#endif  // SYNDEC_TRAINER_HPP
