#include "syndec/toy_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace syndec {

namespace {

void check_ids(const ToyModel& m, std::span<const TokenId> tokens) {
  for (TokenId t : tokens)
    if (t < 0 || static_cast<std::size_t>(t) >= m.vsize())
      throw TrainError("token id out of range for model vocabulary");
}

std::vector<double> log_softmax(std::vector<double> logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  for (double& v : logits) v -= lse;
  return logits;
}

void rnn_step(const ToyModel& m, TokenId input, const std::vector<double>& hprev,
              std::vector<double>& h) {
  const std::size_t d = m.d();
  const double* emb = m.w.data() + m.emb_off() + static_cast<std::size_t>(input) * d;
  const double* wx = m.w.data() + m.wx_off();
  const double* wh = m.w.data() + m.wh_off();
  const double* b = m.w.data() + m.b_off();
  h.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double a = b[i];
    for (std::size_t j = 0; j < d; ++j) a += wx[i * d + j] * emb[j];
    for (std::size_t j = 0; j < d; ++j) a += wh[i * d + j] * hprev[j];
    h[i] = std::tanh(a);
  }
}

std::vector<double> logits_of(const ToyModel& m, const std::vector<double>& h) {
  const std::size_t d = m.d();
  const std::size_t v = m.vsize();
  const double* wout = m.w.data() + m.wout_off();
  const double* bo = m.w.data() + m.bo_off();
  std::vector<double> logits(bo, bo + v);
  for (std::size_t i = 0; i < d; ++i) {
    const double hi = h[i];
    const double* row = wout + i * v;
    for (std::size_t k = 0; k < v; ++k) logits[k] += hi * row[k];
  }
  return logits;
}

}  // namespace

ToyModel ToyModel::init(Vocabulary vocab, int hidden, std::uint64_t seed) {
  if (hidden < 1) throw TrainError("hidden size must be >= 1");
  ToyModel m;
  m.vocab = std::move(vocab);
  m.hidden = hidden;
  m.w.resize(m.n_params());
  std::mt19937_64 rng(seed);
  for (double& v : m.w) v = (unit_uniform(rng) * 2.0 - 1.0) * 0.1;
  return m;
}

double sequence_loss(const ToyModel& m, std::span<const TokenId> tokens,
                     std::vector<double>* grad) {
  check_ids(m, tokens);
  if (grad && grad->size() != m.n_params())
    throw TrainError("gradient buffer does not match parameter count");

  const std::size_t d = m.d();
  const std::size_t v = m.vsize();
  const std::size_t steps = tokens.size() + 1;

  std::vector<TokenId> inputs(steps);
  std::vector<TokenId> targets(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    inputs[t] = t == 0 ? Vocabulary::kBosId : tokens[t - 1];
    targets[t] = t < tokens.size() ? tokens[t] : Vocabulary::kEosId;
  }

  std::vector<std::vector<double>> hs;
  std::vector<std::vector<double>> lps;
  if (grad) {
    hs.reserve(steps);
    lps.reserve(steps);
  }
  std::vector<double> hprev(d, 0.0);
  std::vector<double> h;
  double loss = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    rnn_step(m, inputs[t], hprev, h);
    std::vector<double> lp = log_softmax(logits_of(m, h));
    loss += -lp[static_cast<std::size_t>(targets[t])];
    if (grad) {
      hs.push_back(h);
      lps.push_back(std::move(lp));
    }
    hprev = h;
  }
  if (!grad) return loss;

  double* g = grad->data();
  const double* wx = m.w.data() + m.wx_off();
  const double* wh = m.w.data() + m.wh_off();
  const double* wout = m.w.data() + m.wout_off();
  const std::vector<double> hzero(d, 0.0);
  std::vector<double> carry(d, 0.0);  // dL/dh_t flowing back from step t+1
  std::vector<double> da(d, 0.0);
  for (std::size_t t = steps; t-- > 0;) {
    std::vector<double> dlog(v);
    for (std::size_t k = 0; k < v; ++k) dlog[k] = std::exp(lps[t][k]);
    dlog[static_cast<std::size_t>(targets[t])] -= 1.0;

    const std::vector<double>& ht = hs[t];
    for (std::size_t k = 0; k < v; ++k) g[m.bo_off() + k] += dlog[k];
    for (std::size_t i = 0; i < d; ++i) {
      const double hi = ht[i];
      const double* row = wout + i * v;
      double* grow = g + m.wout_off() + i * v;
      double back = 0.0;
      for (std::size_t k = 0; k < v; ++k) {
        grow[k] += hi * dlog[k];
        back += row[k] * dlog[k];
      }
      carry[i] += back;
      da[i] = carry[i] * (1.0 - hi * hi);
    }
    for (std::size_t i = 0; i < d; ++i) g[m.b_off() + i] += da[i];

    const double* e = m.w.data() + m.emb_off() + static_cast<std::size_t>(inputs[t]) * d;
    const std::vector<double>& hp = t > 0 ? hs[t - 1] : hzero;
    for (std::size_t i = 0; i < d; ++i) {
      double* gx = g + m.wx_off() + i * d;
      double* gh = g + m.wh_off() + i * d;
      const double dai = da[i];
      for (std::size_t j = 0; j < d; ++j) {
        gx[j] += dai * e[j];
        gh[j] += dai * hp[j];
      }
    }
    double* ge = g + m.emb_off() + static_cast<std::size_t>(inputs[t]) * d;
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += wx[i * d + j] * da[i];
      ge[j] += acc;
    }
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += wh[i * d + j] * da[i];
      carry[j] = acc;
    }
  }
  return loss;
}

LossStats forward_loss(const ToyModel& model, const std::vector<std::vector<TokenId>>& batch) {
  LossStats stats;
  for (const auto& seq : batch) {
    stats.loss += sequence_loss(model, seq, nullptr);
    stats.tokens += seq.size() + 1;
  }
  return stats;
}

LossStats add_gradient(const ToyModel& model, const std::vector<std::vector<TokenId>>& batch,
                       std::vector<double>& grad) {
  LossStats stats;
  for (const auto& seq : batch) {
    stats.loss += sequence_loss(model, seq, &grad);
    stats.tokens += seq.size() + 1;
  }
  return stats;
}

std::vector<double> backward(const ToyModel& model,
                             const std::vector<std::vector<TokenId>>& batch) {
  std::vector<double> grad(model.n_params(), 0.0);
  add_gradient(model, batch, grad);
  return grad;
}

namespace {
struct ToyState final : ScorerStateBase {
  std::vector<double> h;
};
}  // namespace

ToyScorer::ToyScorer(ToyModel model) : model_(std::move(model)) {
  if (model_.w.size() != model_.n_params())
    throw TrainError("parameter vector does not match model shape");
}

ScorerState ToyScorer::start() const {
  auto state = std::make_shared<ToyState>();
  const std::vector<double> hzero(model_.d(), 0.0);
  rnn_step(model_, Vocabulary::kBosId, hzero, state->h);
  return state;
}

std::vector<double> ToyScorer::next_log_probs(const ScorerState& state) const {
  const auto& ts = dynamic_cast<const ToyState&>(*state);
  return log_softmax(logits_of(model_, ts.h));
}

ScorerState ToyScorer::advance(const ScorerState& state, TokenId token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= model_.vsize())
    throw TrainError("token id out of range for model vocabulary");
  const auto& ts = dynamic_cast<const ToyState&>(*state);
  auto next = std::make_shared<ToyState>();
  rnn_step(model_, token, ts.h, next->h);
  return next;
}

void ToyModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw TrainError("cannot write model: " + path);
  out << "toy v1\n";
  out << "hidden " << hidden << "\n";
  out << "vocab " << vocab.size() << "\n";
  for (std::size_t id = 0; id < vocab.size(); ++id)
    out << vocab.token(static_cast<TokenId>(id)) << "\t" << id << "\n";
  out << "params " << w.size() << "\n";
  out.precision(17);
  for (double v : w) out << v << "\n";
  if (!out) throw TrainError("write failed: " + path);
}

ToyModel ToyModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TrainError("cannot read model: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "toy v1")
    throw TrainError("not a toy model file: " + path);

  auto expect_field = [&](const std::string& name) -> std::string {
    if (!std::getline(in, line)) throw TrainError("truncated model file: " + path);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value) || key != name)
      throw TrainError("malformed model header: " + path);
    return value;
  };

  ToyModel m;
  m.hidden = std::stoi(expect_field("hidden"));
  const std::size_t vocab_size = std::stoul(expect_field("vocab"));
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (!std::getline(in, line)) throw TrainError("truncated model file: " + path);
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw TrainError("malformed vocab line: " + line);
    TokenId id = m.vocab.add(line.substr(0, tab));
    if (id != std::stoi(line.substr(tab + 1)))
      throw TrainError("vocab ids out of order in: " + path);
  }
  const std::size_t n = std::stoul(expect_field("params"));
  if (n != m.n_params()) throw TrainError("parameter count does not match shape: " + path);
  m.w.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!(in >> m.w[i])) throw TrainError("truncated parameter block: " + path);
  return m;
}

}  // namespace syndec
