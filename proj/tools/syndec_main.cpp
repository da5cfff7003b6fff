// Command-line driver: representation conversion, subword segmentation,
// model training, beam-search decoding, and BLEU evaluation with paired
// bootstrap significance tests.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "syndec/bleu.hpp"
#include "syndec/bpe.hpp"
#include "syndec/decoder.hpp"
#include "syndec/ngram.hpp"
#include "syndec/scorer.hpp"
#include "syndec/toy_model.hpp"
#include "syndec/trainer.hpp"
#include "syndec/transducer.hpp"
#include "syndec/tree.hpp"
#include "syndec/vocab.hpp"

namespace {

using namespace syndec;

// ------------------------------------------------------------ file plumbing

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Writes through a temp file: the target appears only on commit, and an
// uncommitted temp file is removed on destruction, so a failed run never
// leaves a partial output behind. Path "-" writes to stdout.
class OutputFile {
 public:
  explicit OutputFile(std::string path) : path_(std::move(path)) {
    if (to_stdout()) return;
    tmp_ = path_ + ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot write " + path_);
  }

  ~OutputFile() {
    if (!to_stdout() && !committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  std::ostream& stream() { return to_stdout() ? std::cout : out_; }

  void commit() {
    if (to_stdout()) {
      std::cout.flush();
      return;
    }
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  bool to_stdout() const { return path_ == "-"; }

  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

// For model saves that write a path themselves.
template <typename SaveFn>
void save_via_temp(const std::string& path, SaveFn&& save) {
  const std::string tmp = path + ".tmp";
  try {
    save(tmp);
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

std::string fmt(double value, int precision = 10) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

std::string fmt_fixed(double value, int decimals) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << value;
  return out.str();
}

// ------------------------------------------------------------ shared pieces

SymbolClassifier make_classifier(const std::string& nonterminals_path,
                                 const std::string& marker) {
  std::unordered_set<std::string> inventory;
  if (!nonterminals_path.empty()) {
    for (const std::string& line : read_lines(nonterminals_path))
      if (!line.empty()) inventory.insert(line);
  }
  return SymbolClassifier(std::move(inventory), marker);
}

BpeModel load_bpe_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_bpe(in);
}

struct LoadedModel {
  std::unique_ptr<SequenceScorer> scorer;
  std::string kind;
};

// Model files are sniffed by their first line.
LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model " + path);
  std::string header;
  std::getline(in, header);
  in.close();
  if (header == "toy v1")
    return {std::make_unique<ToyScorer>(ToyModel::load(path)), "toy"};
  if (header == "ngram v1")
    return {std::make_unique<NgramModel>(NgramModel::load(path)), "ngram"};
  throw std::runtime_error("unrecognized model header '" + header + "' in " + path);
}

std::vector<std::vector<TokenId>> ids_of_lines(const std::vector<std::string>& lines,
                                               const Vocabulary& vocab) {
  std::vector<std::vector<TokenId>> ids;
  ids.reserve(lines.size());
  for (const std::string& line : lines)
    ids.push_back(to_ids(vocab, TokenSeq::split(TokenKind::PlainText, line)));
  return ids;
}

std::vector<std::string> revert_lines(const std::vector<std::string>& lines,
                                      const std::string& marker) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const std::string& line : lines)
    out.push_back(revert_bpe(TokenSeq::split(TokenKind::PlainText, line), marker).str());
  return out;
}

// ------------------------------------------------------------ convert

// Table-style representation names. tree/deriv/linder carry the full
// structure; text and pos are projections, so they only convert to
// themselves.
enum class Rep { Text, Tree, Deriv, Linder, Pos };

Rep parse_rep(const std::string& name) {
  if (name == "text") return Rep::Text;
  if (name == "tree") return Rep::Tree;
  if (name == "deriv") return Rep::Deriv;
  if (name == "linder") return Rep::Linder;
  if (name == "pos") return Rep::Pos;
  throw std::runtime_error("unknown representation '" + name + "'");
}

bool tree_complete(Rep rep) {
  return rep == Rep::Tree || rep == Rep::Deriv || rep == Rep::Linder;
}

Tree ingest_tree(Rep from, const std::string& line, const SymbolClassifier& classifier,
                 const std::string& root) {
  switch (from) {
    case Rep::Tree:
      return parse_ptb(line);
    case Rep::Deriv:
      return derivation_to_tree(text_to_derivation(line));
    case Rep::Linder: {
      const TokenSeq seq = TokenSeq::split(TokenKind::LinearDerivation, line);
      return derivation_to_tree(linear_to_derivation(seq, classifier, root));
    }
    default:
      throw std::runtime_error("representation does not carry a tree");
  }
}

std::string emit_rep(Rep to, const Tree& tree) {
  switch (to) {
    case Rep::Text:
      return tree_to_plain(tree).str();
    case Rep::Tree:
      return render_ptb(tree);
    case Rep::Deriv:
      return derivation_to_text(tree_to_derivation(tree));
    case Rep::Linder:
      return derivation_to_linear(tree_to_derivation(tree)).str();
    case Rep::Pos:
      return tree_to_pos_text(tree).str();
  }
  throw std::runtime_error("unknown representation");
}

struct ConvertArgs {
  std::string from;
  std::string to;
  std::string trees_path;
  std::string out = "-";
  std::string root = "ROOT";
  std::string bpe_path;
  std::string nonterminals;
  std::string save_nonterminals;
  std::string marker = std::string(kDefaultBpeMarker);
};

int run_convert(const ConvertArgs& args) {
  const Rep from = parse_rep(args.from);
  const Rep to = parse_rep(args.to);
  if (!tree_complete(from) && to != from)
    throw std::runtime_error("cannot convert from " + args.from + " to " + args.to +
                             ": words alone do not determine a tree");
  if (from == Rep::Linder && args.nonterminals.empty())
    throw std::runtime_error(
        "--from linder needs --nonterminals FILE to recognize bare labels");
  if (!args.bpe_path.empty() && !tree_complete(from))
    throw std::runtime_error("--bpe needs a tree-carrying source representation");
  if (!args.save_nonterminals.empty() && !tree_complete(from))
    throw std::runtime_error("--save-nonterminals needs a tree-carrying source");

  const SymbolClassifier classifier = make_classifier(args.nonterminals, args.marker);
  std::optional<BpeModel> bpe;
  if (!args.bpe_path.empty()) bpe = load_bpe_file(args.bpe_path);

  const std::vector<std::string> lines = read_lines(args.trees_path);
  std::set<std::string> labels;
  OutputFile out(args.out);
  std::size_t out_tokens = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      std::string emitted;
      if (!tree_complete(from)) {
        emitted = TokenSeq::split(TokenKind::PlainText, lines[i]).str();
      } else {
        Tree tree = ingest_tree(from, lines[i], classifier, args.root);
        if (!args.save_nonterminals.empty()) {
          std::unordered_set<std::string> found;
          collect_labels(tree, found);
          labels.insert(found.begin(), found.end());
        }
        if (bpe) tree = subword_tree(*bpe, tree);
        emitted = emit_rep(to, tree);
      }
      out_tokens += TokenSeq::split(TokenKind::PlainText, emitted).tokens.size();
      out.stream() << emitted << "\n";
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  out.commit();

  if (!args.save_nonterminals.empty()) {
    OutputFile nts(args.save_nonterminals);
    for (const std::string& label : labels) nts.stream() << label << "\n";
    nts.commit();
  }

  const double mean =
      lines.empty() ? 0.0 : static_cast<double>(out_tokens) / static_cast<double>(lines.size());
  std::cerr << "converted " << lines.size() << " lines (" << args.from << " -> " << args.to
            << "), mean output length " << fmt_fixed(mean, 2) << " tokens\n";
  return 0;
}

// ------------------------------------------------------------ bpe

struct LearnBpeArgs {
  std::string input;
  std::string out = "-";
  std::size_t merges = 0;
  std::string marker = std::string(kDefaultBpeMarker);
};

int run_learn_bpe(const LearnBpeArgs& args) {
  BpeModel model = learn_bpe(read_lines(args.input), args.merges);
  model.continuation_marker = args.marker;
  OutputFile out(args.out);
  save_bpe(model, out.stream());
  out.commit();
  std::cerr << "learned " << model.merges.size() << " merges\n";
  return 0;
}

struct ApplyBpeArgs {
  std::string input;
  std::string out = "-";
  std::string bpe_path;
  std::string marker = std::string(kDefaultBpeMarker);
  bool revert = false;
};

int run_apply_bpe(const ApplyBpeArgs& args) {
  std::optional<BpeModel> model;
  if (!args.revert) {
    if (args.bpe_path.empty()) throw std::runtime_error("apply-bpe needs --bpe FILE");
    model = load_bpe_file(args.bpe_path);
  } else if (!args.bpe_path.empty()) {
    model = load_bpe_file(args.bpe_path);
  }
  const std::string marker = model ? model->continuation_marker : args.marker;

  const std::vector<std::string> lines = read_lines(args.input);
  OutputFile out(args.out);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      const TokenSeq seq = TokenSeq::split(TokenKind::PlainText, lines[i]);
      out.stream() << (args.revert ? revert_bpe(seq, marker) : apply_bpe(*model, seq)).str()
                   << "\n";
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  out.commit();
  return 0;
}

// ------------------------------------------------------------ training

struct TrainNgramArgs {
  std::string input;
  std::string out;
  int order = 3;
  double k = 0.1;
};

int run_train_ngram(const TrainNgramArgs& args) {
  const std::vector<std::string> lines = read_lines(args.input);
  std::vector<TokenSeq> seqs;
  seqs.reserve(lines.size());
  for (const std::string& line : lines)
    seqs.push_back(TokenSeq::split(TokenKind::PlainText, line));
  const Vocabulary vocab = Vocabulary::from_corpus(seqs);
  std::vector<std::vector<TokenId>> corpus;
  corpus.reserve(seqs.size());
  for (const TokenSeq& seq : seqs) corpus.push_back(to_ids(vocab, seq));

  const NgramModel model = train_ngram(corpus, vocab, args.order, args.k);
  save_via_temp(args.out, [&](const std::string& tmp) { model.save(tmp); });

  std::cout << "trained order-" << args.order << " model on " << lines.size() << " lines, "
            << vocab.size() << " vocabulary entries\n";
  std::cout << "lines=" << lines.size() << "\n"
            << "vocab=" << vocab.size() << "\n"
            << "order=" << args.order << "\n"
            << "k=" << fmt(args.k) << "\n";
  return 0;
}

struct TrainToyArgs {
  std::string input;
  std::string out;
  std::string val;
  int hidden = 16;
  std::size_t batch_tokens = 4096;
  int batches_per_update = 1;
  double lr = 0.1;
  int max_steps = 100;
  std::uint64_t seed = 1;
  int checkpoint_every = 0;
  int average_last = 1;
};

int run_train_toy(const TrainToyArgs& args) {
  const std::vector<std::string> lines = read_lines(args.input);
  std::vector<TokenSeq> seqs;
  seqs.reserve(lines.size());
  for (const std::string& line : lines)
    seqs.push_back(TokenSeq::split(TokenKind::PlainText, line));
  const Vocabulary vocab = Vocabulary::from_corpus(seqs);
  std::vector<std::vector<TokenId>> corpus;
  corpus.reserve(seqs.size());
  for (const TokenSeq& seq : seqs) corpus.push_back(to_ids(vocab, seq));

  TrainConfig config;
  config.hidden = args.hidden;
  config.batch_size_tokens = args.batch_tokens;
  config.batches_per_update = args.batches_per_update;
  config.learning_rate = args.lr;
  config.max_steps = args.max_steps;
  config.seed = args.seed;
  config.checkpoint_every = args.checkpoint_every;
  config.average_last = args.average_last;

  const TrainResult result = train(corpus, vocab, config, &std::cerr);
  save_via_temp(args.out, [&](const std::string& tmp) { result.model.save(tmp); });

  std::cout << "trained " << result.log.size() << " updates, kept "
            << result.checkpoints.size() << " checkpoints, averaged last "
            << std::min<std::size_t>(result.checkpoints.size(),
                                     static_cast<std::size_t>(args.average_last))
            << "\n";
  std::cout << "updates=" << result.log.size() << "\n"
            << "checkpoints=" << result.checkpoints.size() << "\n"
            << "train_loss=" << fmt(result.log.back().loss_per_token) << "\n";
  if (!args.val.empty()) {
    const double val_loss = evaluate_loss(result.model, ids_of_lines(read_lines(args.val), vocab));
    std::cout << "val_loss=" << fmt(val_loss) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------ decode

TokenKind parse_kind(const std::string& name) {
  if (name == "text") return TokenKind::PlainText;
  if (name == "tree") return TokenKind::LinearTree;
  if (name == "linder") return TokenKind::LinearDerivation;
  if (name == "pos") return TokenKind::PosText;
  throw std::runtime_error("unknown representation '" + name + "'");
}

void print_decode_report(const DecodeResult& result) {
  std::cout << "decoded " << result.tokens.tokens.size() << " tokens, score "
            << fmt(result.score) << (result.finished ? "" : ", unfinished") << "\n";
  std::cout << "tokens=" << result.tokens.str() << "\n"
            << "score=" << fmt(result.score) << "\n"
            << "finished=" << (result.finished ? 1 : 0) << "\n";
  for (std::size_t m = 0; m < result.internal.size(); ++m) {
    std::cout << "internal_" << m << "=" << result.internal[m].str() << "\n"
              << "internal_score_" << m << "=" << fmt(result.internal_scores[m]) << "\n";
  }
  std::cout << "pruned_dead_lanes=" << result.pruned_dead_lanes << "\n"
            << "mask_blocked=" << result.mask_blocked << "\n";
}

struct DecodeArgs {
  std::string mode;
  std::vector<std::string> models;
  std::vector<std::string> internals;  // TYPE=FILE
  std::vector<double> weights;
  std::string out = "-";
  std::string rep = "text";
  std::string nonterminals;
  std::string marker = std::string(kDefaultBpeMarker);
  int beam = 4;
  int inner_beam = 16;
  int max_len = 128;
  int expansion_cap = 64;
  double gamma = 0.0;
  bool constrain = false;
  bool trace = false;
};

int run_decode(const DecodeArgs& args) {
  DecodeConfig config;
  config.beam = args.beam;
  config.inner_beam = args.inner_beam;
  config.max_len = args.max_len;
  config.expansion_cap = args.expansion_cap;
  config.nonterminal_gamma = args.gamma;
  config.constrain_wellformed = args.constrain;
  config.ensemble_weights = args.weights;
  config.kind = parse_kind(args.rep);
  config.classifier = make_classifier(args.nonterminals, args.marker);
  if (args.trace) config.trace = &std::cerr;

  std::vector<LoadedModel> loaded;
  loaded.reserve(args.models.size());
  for (const std::string& path : args.models) loaded.push_back(load_model(path));

  std::vector<LoadedModel> inner_models;
  std::vector<std::unique_ptr<MappingTransducer>> machines;

  DecodeResult result;
  if (args.mode == "single") {
    if (loaded.size() != 1) throw std::runtime_error("--mode single takes exactly one --model");
    result = decode_single(*loaded.front().scorer, config);
  } else if (args.mode == "ensemble") {
    std::vector<const SequenceScorer*> members;
    members.reserve(loaded.size());
    for (const LoadedModel& m : loaded) members.push_back(m.scorer.get());
    result = decode_ensemble_same(members, config);
  } else {
    if (loaded.size() != 1)
      throw std::runtime_error("--mode multirep takes one external --model");
    if (args.internals.empty())
      throw std::runtime_error("--mode multirep needs at least one --internal TYPE=FILE");
    std::vector<InternalModel> internals;
    for (const std::string& entry : args.internals) {
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("--internal expects TYPE=FILE, got '" + entry + "'");
      const std::string type = entry.substr(0, eq);
      inner_models.push_back(load_model(entry.substr(eq + 1)));
      const Vocabulary& vocab = inner_models.back().scorer->vocab();
      InternalModel internal;
      if (type == "tree" || type == "linder") {
        machines.push_back(std::make_unique<MappingTransducer>(
            build_syntax_to_plain(vocab, config.classifier)));
        internal.kind = type == "tree" ? TokenKind::LinearTree : TokenKind::LinearDerivation;
      } else if (type == "pos") {
        machines.push_back(std::make_unique<MappingTransducer>(
            build_pos_to_plain(vocab, config.classifier)));
        internal.kind = TokenKind::PosText;
      } else if (type == "bpe") {
        machines.push_back(std::make_unique<MappingTransducer>(
            build_word_to_bpe(vocab, config.classifier)));
        internal.kind = TokenKind::PlainText;
      } else {
        throw std::runtime_error("unknown internal type '" + type + "'");
      }
      internal.scorer = inner_models.back().scorer.get();
      internal.transducer = machines.back().get();
      internals.push_back(internal);
    }
    result = decode_multi_rep(*loaded.front().scorer, internals, config);
  }

  OutputFile out(args.out);
  out.stream() << result.tokens.str() << "\n";
  out.commit();
  print_decode_report(result);
  return 0;
}

// ------------------------------------------------------------ evaluation

struct EvalArgs {
  std::string hyp;
  std::string ref;
  std::string out = "-";
  std::string marker = std::string(kDefaultBpeMarker);
};

int run_eval_bleu(const EvalArgs& args) {
  const std::vector<std::string> hyp = revert_lines(read_lines(args.hyp), args.marker);
  const std::vector<std::string> ref = revert_lines(read_lines(args.ref), args.marker);
  const EvalReport report = bleu(hyp, ref);

  OutputFile out(args.out);
  out.stream() << "BLEU = " << fmt_fixed(report.bleu, 2) << " (precisions "
               << fmt_fixed(100.0 * report.precisions[0], 1) << "/"
               << fmt_fixed(100.0 * report.precisions[1], 1) << "/"
               << fmt_fixed(100.0 * report.precisions[2], 1) << "/"
               << fmt_fixed(100.0 * report.precisions[3], 1) << ", BP "
               << fmt_fixed(report.brevity_penalty, 3) << ", hyp " << report.hyp_len
               << " tokens, ref " << report.ref_len << " tokens)\n";
  out.stream() << "bleu=" << fmt(report.bleu) << "\n";
  for (int n = 0; n < kBleuOrder; ++n)
    out.stream() << "p" << n + 1 << "=" << fmt(report.precisions[static_cast<std::size_t>(n)])
                 << "\n";
  out.stream() << "bp=" << fmt(report.brevity_penalty) << "\n"
               << "hyp_len=" << report.hyp_len << "\n"
               << "ref_len=" << report.ref_len << "\n"
               << "sentences=" << report.sentences.size() << "\n";
  out.commit();
  return 0;
}

struct SignificanceArgs {
  std::string hyp_a;
  std::string hyp_b;
  std::string ref;
  std::string out = "-";
  std::string marker = std::string(kDefaultBpeMarker);
  int samples = 1000;
  std::uint64_t seed = 1;
  double threshold = 0.05;
};

int run_significance(const SignificanceArgs& args) {
  const std::vector<std::string> hyp_a = revert_lines(read_lines(args.hyp_a), args.marker);
  const std::vector<std::string> hyp_b = revert_lines(read_lines(args.hyp_b), args.marker);
  const std::vector<std::string> ref = revert_lines(read_lines(args.ref), args.marker);
  const BootstrapResult result = paired_bootstrap(hyp_a, hyp_b, ref, args.samples, args.seed);
  const bool significant = result.p_value < args.threshold;

  OutputFile out(args.out);
  out.stream() << "system A BLEU " << fmt_fixed(result.bleu_a, 2) << ", system B BLEU "
               << fmt_fixed(result.bleu_b, 2) << "\n";
  out.stream() << "paired bootstrap, " << result.samples << " samples, seed " << args.seed
               << ": p = " << fmt_fixed(result.p_value, 4) << "\n";
  out.stream() << "B better than A at threshold " << fmt(args.threshold) << ": "
               << (significant ? "yes" : "no") << "\n";
  out.stream() << "bleu_a=" << fmt(result.bleu_a) << "\n"
               << "bleu_b=" << fmt(result.bleu_b) << "\n"
               << "p_value=" << fmt(result.p_value) << "\n"
               << "wins_a=" << result.wins_a << "\n"
               << "wins_b=" << result.wins_b << "\n"
               << "ties=" << result.ties << "\n"
               << "samples=" << result.samples << "\n"
               << "significant=" << (significant ? 1 : 0) << "\n";
  out.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"syntax-aware sequence decoding toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> reps = {"text", "tree", "deriv", "linder", "pos"};
  const std::vector<std::string> kinds = {"text", "tree", "linder", "pos"};

  ConvertArgs convert_args;
  CLI::App* convert = app.add_subcommand("convert", "convert between tree representations");
  convert->add_option("--from", convert_args.from, "source representation")
      ->required()
      ->check(CLI::IsMember(reps));
  convert->add_option("--to", convert_args.to, "target representation")
      ->required()
      ->check(CLI::IsMember(reps));
  convert->add_option("--trees", convert_args.trees_path, "input file, one item per line")
      ->required();
  convert->add_option("--out", convert_args.out, "output file, '-' for stdout");
  convert->add_option("--root", convert_args.root, "root label for delinearization");
  convert->add_option("--bpe", convert_args.bpe_path, "segment tree leaves with this merge file");
  convert->add_option("--nonterminals", convert_args.nonterminals,
                      "label inventory file, one label per line");
  convert->add_option("--save-nonterminals", convert_args.save_nonterminals,
                      "write the labels seen in the input");
  convert->add_option("--marker", convert_args.marker, "subword continuation marker");

  LearnBpeArgs learn_args;
  CLI::App* learn = app.add_subcommand("learn-bpe", "learn byte-pair merges from plain text");
  learn->add_option("input", learn_args.input, "plain-text corpus")->required();
  learn->add_option("--merges", learn_args.merges, "number of merges to learn")->required();
  learn->add_option("--out", learn_args.out, "merge file, '-' for stdout");
  learn->add_option("--marker", learn_args.marker, "subword continuation marker");

  ApplyBpeArgs apply_args;
  CLI::App* apply = app.add_subcommand("apply-bpe", "segment or rejoin plain text");
  apply->add_option("input", apply_args.input, "plain-text corpus")->required();
  apply->add_option("--bpe", apply_args.bpe_path, "merge file from learn-bpe");
  apply->add_option("--out", apply_args.out, "output file, '-' for stdout");
  apply->add_option("--marker", apply_args.marker, "marker for --revert without --bpe");
  apply->add_flag("--revert", apply_args.revert, "undo segmentation instead of applying it");

  TrainNgramArgs ngram_args;
  CLI::App* ngram = app.add_subcommand("train-ngram", "count an add-k n-gram model");
  ngram->add_option("input", ngram_args.input, "token corpus, one sequence per line")
      ->required();
  ngram->add_option("--order", ngram_args.order, "n-gram order")
      ->required()
      ->check(CLI::PositiveNumber);
  ngram->add_option("--k", ngram_args.k, "additive smoothing constant")
      ->required()
      ->check(CLI::NonNegativeNumber);
  ngram->add_option("--out", ngram_args.out, "model file")->required();

  TrainToyArgs toy_args;
  CLI::App* toy = app.add_subcommand("train-toy", "train the toy recurrent model with SGD");
  toy->add_option("input", toy_args.input, "token corpus, one sequence per line")->required();
  toy->add_option("--out", toy_args.out, "model file")->required();
  toy->add_option("--val", toy_args.val, "held-out corpus scored after training");
  toy->add_option("--hidden", toy_args.hidden, "hidden size")->check(CLI::PositiveNumber);
  toy->add_option("--batch-tokens", toy_args.batch_tokens, "padded token budget per batch")
      ->check(CLI::PositiveNumber);
  toy->add_option("--batches-per-update", toy_args.batches_per_update,
                  "gradient accumulation window")
      ->check(CLI::PositiveNumber);
  toy->add_option("--lr", toy_args.lr, "learning rate")->check(CLI::PositiveNumber);
  toy->add_option("--max-steps", toy_args.max_steps, "parameter updates to run")
      ->check(CLI::PositiveNumber);
  toy->add_option("--seed", toy_args.seed, "initialization seed");
  toy->add_option("--checkpoint-every", toy_args.checkpoint_every,
                  "updates between checkpoints, 0 keeps only the last")
      ->check(CLI::NonNegativeNumber);
  toy->add_option("--average-last", toy_args.average_last,
                  "trailing checkpoints averaged into the saved model")
      ->check(CLI::PositiveNumber);

  DecodeArgs decode_args;
  CLI::App* decode = app.add_subcommand("decode", "beam-search the best sequence");
  decode->add_option("--mode", decode_args.mode, "single, ensemble, or multirep")
      ->required()
      ->check(CLI::IsMember({"single", "ensemble", "multirep"}));
  decode->add_option("--model", decode_args.models, "model file; external model for multirep")
      ->required();
  decode->add_option("--internal", decode_args.internals,
                     "internal model as TYPE=FILE with TYPE tree|linder|pos|bpe");
  decode->add_option("--weight", decode_args.weights, "per-model log-linear weight");
  decode->add_option("--out", decode_args.out, "decoded sequence file, '-' for stdout");
  decode->add_option("--rep", decode_args.rep, "representation being decoded")
      ->check(CLI::IsMember(kinds));
  decode->add_option("--nonterminals", decode_args.nonterminals,
                     "label inventory file for the penalty and constraint");
  decode->add_option("--marker", decode_args.marker, "subword continuation marker");
  decode->add_option("--beam", decode_args.beam, "beam width")->check(CLI::PositiveNumber);
  decode->add_option("--inner-beam", decode_args.inner_beam, "internal states kept per model")
      ->check(CLI::PositiveNumber);
  decode->add_option("--max-len", decode_args.max_len, "emitted tokens including </s>")
      ->check(CLI::PositiveNumber);
  decode->add_option("--expansion-cap", decode_args.expansion_cap,
                     "internal symbols consumed per external token")
      ->check(CLI::PositiveNumber);
  decode->add_option("--gamma", decode_args.gamma, "non-terminal log-score penalty, <= 0")
      ->check(CLI::Range(-1e9, 0.0));
  decode->add_flag("--constrain", decode_args.constrain, "mask ill-formed continuations");
  decode->add_flag("--trace", decode_args.trace, "write per-step beam lines to stderr");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval-bleu", "corpus BLEU-4 on de-segmented words");
  eval->add_option("hyp", eval_args.hyp, "hypothesis file")->required();
  eval->add_option("ref", eval_args.ref, "reference file")->required();
  eval->add_option("--out", eval_args.out, "report file, '-' for stdout");
  eval->add_option("--marker", eval_args.marker, "subword continuation marker");

  SignificanceArgs sig_args;
  CLI::App* sig = app.add_subcommand("significance", "paired bootstrap BLEU comparison");
  sig->add_option("hyp_a", sig_args.hyp_a, "baseline hypothesis file")->required();
  sig->add_option("hyp_b", sig_args.hyp_b, "contrast hypothesis file")->required();
  sig->add_option("ref", sig_args.ref, "reference file")->required();
  sig->add_option("--samples", sig_args.samples, "bootstrap resamples")
      ->check(CLI::PositiveNumber);
  sig->add_option("--seed", sig_args.seed, "resampling seed");
  sig->add_option("--threshold", sig_args.threshold, "significance threshold")
      ->check(CLI::Range(0.0, 1.0));
  sig->add_option("--out", sig_args.out, "report file, '-' for stdout");
  sig->add_option("--marker", sig_args.marker, "subword continuation marker");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(convert)) return run_convert(convert_args);
    if (app.got_subcommand(learn)) return run_learn_bpe(learn_args);
    if (app.got_subcommand(apply)) return run_apply_bpe(apply_args);
    if (app.got_subcommand(ngram)) return run_train_ngram(ngram_args);
    if (app.got_subcommand(toy)) return run_train_toy(toy_args);
    if (app.got_subcommand(decode)) return run_decode(decode_args);
    if (app.got_subcommand(eval)) return run_eval_bleu(eval_args);
    if (app.got_subcommand(sig)) return run_significance(sig_args);
  } catch (const std::exception& e) {
    std::cerr << "syndec: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "syndec: no subcommand\n";
  return 1;
}
