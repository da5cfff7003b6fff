#include "syndec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace syndec {

void validate(const TrainConfig& config) {
  if (config.hidden < 1) throw TrainError("hidden size must be positive");
  if (config.batch_size_tokens < 1) throw TrainError("batch token budget must be positive");
  if (config.batches_per_update < 1) throw TrainError("batches per update must be positive");
  if (!(config.learning_rate > 0.0)) throw TrainError("learning rate must be positive");
  if (config.max_steps < 1) throw TrainError("max steps must be positive");
}

std::vector<std::vector<std::size_t>> batch_corpus(
    const std::vector<std::vector<TokenId>>& corpus, std::size_t batch_size_tokens) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].size() < corpus[b].size();
  });

  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> current;
  for (std::size_t idx : order) {
    const std::size_t len = corpus[idx].size();
    if (len > batch_size_tokens)
      throw TrainError("sequence of " + std::to_string(len) +
                       " tokens exceeds batch budget of " +
                       std::to_string(batch_size_tokens));
    // Ascending order makes the candidate the longest sequence in the batch.
    if (!current.empty() && len * (current.size() + 1) > batch_size_tokens) {
      batches.push_back(std::move(current));
      current.clear();
    }
    current.push_back(idx);
  }
  if (!current.empty()) batches.push_back(std::move(current));
  return batches;
}

GradientAccumulator::GradientAccumulator(std::size_t n_params) : grad_(n_params, 0.0) {}

void GradientAccumulator::add_batch(const ToyModel& model,
                                    const std::vector<std::vector<TokenId>>& batch) {
  if (grad_.size() != model.n_params())
    throw TrainError("accumulator does not match model shape");
  const std::vector<double> before = grad_;
  const LossStats stats = add_gradient(model, batch, grad_);
  loss_ += stats.loss;
  tokens_ += stats.tokens;
  double sq = 0.0;
  for (std::size_t i = 0; i < grad_.size(); ++i) {
    const double delta = grad_[i] - before[i];
    sq += delta * delta;
  }
  batch_norms_.push_back(std::sqrt(sq));
}

void GradientAccumulator::apply_update(ToyModel& model, double learning_rate) {
  if (grad_.size() != model.n_params())
    throw TrainError("accumulator does not match model shape");
  if (tokens_ == 0) throw TrainError("no accumulated tokens to update from");
  const double scale = learning_rate / static_cast<double>(tokens_);
  for (std::size_t i = 0; i < grad_.size(); ++i) model.w[i] -= scale * grad_[i];
  reset();
}

void GradientAccumulator::reset() {
  std::fill(grad_.begin(), grad_.end(), 0.0);
  batch_norms_.clear();
  loss_ = 0.0;
  tokens_ = 0;
}

double GradientAccumulator::grad_norm() const {
  double sq = 0.0;
  for (double g : grad_) sq += g * g;
  return std::sqrt(sq);
}

double GradientAccumulator::batch_norm_variance() const {
  if (batch_norms_.empty()) return 0.0;
  const double n = static_cast<double>(batch_norms_.size());
  double mean = 0.0;
  for (double v : batch_norms_) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : batch_norms_) var += (v - mean) * (v - mean);
  return var / n;
}

std::ostream& operator<<(std::ostream& out, const UpdateStats& stats) {
  out.precision(10);
  return out << "update=" << stats.update << " batches=" << stats.batches
             << " tokens=" << stats.tokens << " loss=" << stats.loss_per_token
             << " grad_norm=" << stats.grad_norm << " grad_norm_var=" << stats.grad_norm_var;
}

namespace {

UpdateStats snapshot(const GradientAccumulator& acc, int update) {
  UpdateStats stats;
  stats.update = update;
  stats.batches = acc.batches_seen();
  stats.tokens = acc.token_count();
  stats.loss_per_token = acc.loss() / static_cast<double>(acc.token_count());
  stats.grad_norm = acc.grad_norm();
  stats.grad_norm_var = acc.batch_norm_variance();
  return stats;
}

std::vector<std::vector<TokenId>> gather(const std::vector<std::vector<TokenId>>& corpus,
                                         const std::vector<std::size_t>& indices) {
  std::vector<std::vector<TokenId>> batch;
  batch.reserve(indices.size());
  for (std::size_t idx : indices) batch.push_back(corpus.at(idx));
  return batch;
}

}  // namespace

ToyModel accumulate_and_update(ToyModel model, const std::vector<std::vector<TokenId>>& corpus,
                               const std::vector<std::vector<std::size_t>>& batches,
                               const TrainConfig& config, std::vector<UpdateStats>* log) {
  validate(config);
  if (batches.empty()) throw TrainError("empty batch list");
  GradientAccumulator acc(model.n_params());
  int update = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    acc.add_batch(model, gather(corpus, batches[b]));
    const bool window_full =
        acc.batches_seen() == static_cast<std::size_t>(config.batches_per_update);
    if (window_full || b + 1 == batches.size()) {
      ++update;
      if (log) log->push_back(snapshot(acc, update));
      acc.apply_update(model, config.learning_rate);
    }
  }
  return model;
}

TrainResult train(const std::vector<std::vector<TokenId>>& corpus, Vocabulary vocab,
                  const TrainConfig& config, std::ostream* log_stream) {
  validate(config);
  const std::vector<std::vector<std::size_t>> batches =
      batch_corpus(corpus, config.batch_size_tokens);
  if (batches.empty()) throw TrainError("empty training corpus");

  TrainResult result{ToyModel::init(std::move(vocab), config.hidden, config.seed), {}, {}};
  ToyModel& model = result.model;
  GradientAccumulator acc(model.n_params());
  std::size_t cursor = 0;
  bool checkpointed_last = false;
  for (int update = 1; update <= config.max_steps; ++update) {
    for (int k = 0; k < config.batches_per_update; ++k) {
      acc.add_batch(model, gather(corpus, batches[cursor]));
      cursor = (cursor + 1) % batches.size();
    }
    result.log.push_back(snapshot(acc, update));
    if (log_stream) *log_stream << result.log.back() << "\n";
    acc.apply_update(model, config.learning_rate);
    checkpointed_last = config.checkpoint_every > 0 && update % config.checkpoint_every == 0;
    if (checkpointed_last) result.checkpoints.push_back(model);
  }
  if (!checkpointed_last) result.checkpoints.push_back(model);

  if (config.average_last > 1) {
    const std::size_t n =
        std::min<std::size_t>(result.checkpoints.size(),
                              static_cast<std::size_t>(config.average_last));
    const std::vector<ToyModel> tail(result.checkpoints.end() - static_cast<std::ptrdiff_t>(n),
                                     result.checkpoints.end());
    result.model = average_checkpoints(tail);
  }
  return result;
}

ToyModel average_checkpoints(const std::vector<ToyModel>& checkpoints) {
  if (checkpoints.empty()) throw TrainError("no checkpoints to average");
  ToyModel out = checkpoints.front();
  for (std::size_t c = 1; c < checkpoints.size(); ++c) {
    const ToyModel& m = checkpoints[c];
    if (m.hidden != out.hidden || !(m.vocab == out.vocab) || m.w.size() != out.w.size())
      throw TrainError("checkpoint shapes differ");
    for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] += m.w[i];
  }
  const double n = static_cast<double>(checkpoints.size());
  for (double& v : out.w) v /= n;
  return out;
}

double evaluate_loss(const ToyModel& model, const std::vector<std::vector<TokenId>>& corpus) {
  LossStats total = forward_loss(model, corpus);
  if (total.tokens == 0) throw TrainError("empty evaluation corpus");
  return total.loss / static_cast<double>(total.tokens);
}

}  // namespace syndec
