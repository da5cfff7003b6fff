#include "syndec/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "syndec/tree.hpp"

namespace syndec {

namespace {

using NgramCounts = std::unordered_map<std::string, long long>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

struct CorpusSums {
  std::array<long long, kBleuOrder> matched{};
  std::array<long long, kBleuOrder> total{};
  long long hyp_len = 0;
  long long ref_len = 0;

  void add(const SentenceStats& s) {
    for (int n = 0; n < kBleuOrder; ++n) {
      matched[n] += s.matched[n];
      total[n] += s.total[n];
    }
    hyp_len += s.hyp_len;
    ref_len += s.ref_len;
  }
};

double score_from_sums(const CorpusSums& sums, std::array<double, kBleuOrder>* precisions,
                       double* brevity_penalty) {
  std::array<double, kBleuOrder> prec{};
  bool positive = true;
  for (int n = 0; n < kBleuOrder; ++n) {
    if (sums.total[n] == 0 || sums.matched[n] == 0) {
      positive = false;
      prec[n] = 0.0;
    } else {
      prec[n] = static_cast<double>(sums.matched[n]) / static_cast<double>(sums.total[n]);
    }
  }
  double bp = 0.0;
  if (sums.hyp_len > 0) {
    bp = sums.hyp_len >= sums.ref_len
             ? 1.0
             : std::exp(1.0 - static_cast<double>(sums.ref_len) /
                                  static_cast<double>(sums.hyp_len));
  }
  if (precisions) *precisions = prec;
  if (brevity_penalty) *brevity_penalty = bp;
  if (!positive) return 0.0;
  double log_mean = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) log_mean += 0.25 * std::log(prec[n]);
  return 100.0 * bp * std::exp(log_mean);
}

}  // namespace

SentenceStats sentence_stats(const std::vector<std::string>& hyp_tokens,
                             const std::vector<std::string>& ref_tokens) {
  SentenceStats stats;
  stats.hyp_len = static_cast<long long>(hyp_tokens.size());
  stats.ref_len = static_cast<long long>(ref_tokens.size());
  for (int n = 1; n <= kBleuOrder; ++n) {
    const NgramCounts hyp = count_ngrams(hyp_tokens, n);
    const NgramCounts ref = count_ngrams(ref_tokens, n);
    long long matched = 0;
    long long total = 0;
    for (const auto& [key, count] : hyp) {
      total += count;
      auto it = ref.find(key);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    stats.matched[static_cast<std::size_t>(n - 1)] = matched;
    stats.total[static_cast<std::size_t>(n - 1)] = total;
  }
  return stats;
}

EvalReport bleu(const std::vector<std::string>& hyp_lines,
                const std::vector<std::string>& ref_lines) {
  if (hyp_lines.size() != ref_lines.size())
    throw EvalError("hypothesis and reference line counts differ: " +
                    std::to_string(hyp_lines.size()) + " vs " +
                    std::to_string(ref_lines.size()));
  if (hyp_lines.empty()) throw EvalError("empty corpus");

  EvalReport report;
  report.sentences.reserve(hyp_lines.size());
  CorpusSums sums;
  for (std::size_t i = 0; i < hyp_lines.size(); ++i) {
    SentenceStats stats =
        sentence_stats(TokenSeq::split(TokenKind::PlainText, hyp_lines[i]).tokens,
                       TokenSeq::split(TokenKind::PlainText, ref_lines[i]).tokens);
    sums.add(stats);
    report.sentences.push_back(std::move(stats));
  }
  report.hyp_len = sums.hyp_len;
  report.ref_len = sums.ref_len;
  report.bleu = score_from_sums(sums, &report.precisions, &report.brevity_penalty);
  return report;
}

double bleu_from_stats(const std::vector<SentenceStats>& sentences,
                       const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw EvalError("empty resample");
  CorpusSums sums;
  for (std::size_t i : indices) sums.add(sentences.at(i));
  return score_from_sums(sums, nullptr, nullptr);
}

BootstrapResult paired_bootstrap(const std::vector<std::string>& hyp_a,
                                 const std::vector<std::string>& hyp_b,
                                 const std::vector<std::string>& ref_lines, int samples,
                                 std::uint64_t seed) {
  if (samples < 100) throw EvalError("bootstrap needs at least 100 samples");
  const EvalReport report_a = bleu(hyp_a, ref_lines);
  const EvalReport report_b = bleu(hyp_b, ref_lines);

  BootstrapResult result;
  result.bleu_a = report_a.bleu;
  result.bleu_b = report_b.bleu;
  result.samples = samples;

  const std::size_t n = ref_lines.size();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> indices(n);
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) indices[i] = static_cast<std::size_t>(rng() % n);
    const double a = bleu_from_stats(report_a.sentences, indices);
    const double b = bleu_from_stats(report_b.sentences, indices);
    if (a > b)
      ++result.wins_a;
    else if (b > a)
      ++result.wins_b;
    else
      ++result.ties;
  }
  result.p_value =
      (result.wins_a + 0.5 * result.ties) / static_cast<double>(samples);
  return result;
}

}  // namespace syndec
