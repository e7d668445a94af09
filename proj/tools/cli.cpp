// Apache License, Version 2.0, refer to LICENSE.txt

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ldakit/analytics.hpp"
#include "ldakit/corpus.hpp"
#include "ldakit/gibbs.hpp"
#include "ldakit/model_io.hpp"
#include "ldakit/parallel.hpp"
#include "ldakit/rng.hpp"
#include "ldakit/vem.hpp"

namespace fs = std::filesystem;

namespace ldakit::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

enum class Format { kLine, kSparse };
enum class Scheme { kSerial, kAdlda, kBlocked };

const std::map<std::string, Format> kFormatNames{{"line", Format::kLine},
                                                 {"sparse", Format::kSparse}};
const std::map<std::string, Scheme> kSchemeNames{{"serial", Scheme::kSerial},
                                                 {"adlda", Scheme::kAdlda},
                                                 {"blocked", Scheme::kBlocked}};
const std::map<std::string, DistanceMetric> kMetricNames{
    {"hellinger", DistanceMetric::kHellingerSq},
    {"kl", DistanceMetric::kKl},
    {"cosine", DistanceMetric::kOneMinusCosine},
    {"pearson", DistanceMetric::kOneMinusPearson}};

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

std::string zero_padded(int value) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", value);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// The output directory must be usable before any training starts.
void prepare_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir);
  const std::string probe = (fs::path(dir) / ".write-probe").string();
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("directory not writable: " + dir);
  }
  fs::remove(probe, ec);
}

// Vocabulary for id-only corpora: the decimal id doubles as the term.
Vocabulary numeric_vocabulary(int num_terms) {
  Vocabulary vocab;
  for (int id = 0; id < num_terms; ++id) vocab.add(std::to_string(id));
  return vocab;
}

struct LoadedCorpus {
  Corpus corpus;
  Vocabulary vocab;
};

LoadedCorpus load_corpus(const std::string& path, Format format,
                         const Vocabulary* base = nullptr) {
  auto in = open_input(path);
  LoadedCorpus loaded;
  if (format == Format::kLine) {
    if (base != nullptr) loaded.vocab = *base;
    loaded.corpus = parse_line_corpus(in, loaded.vocab);
  } else {
    loaded.corpus = parse_sparse_corpus(in);
    if (base != nullptr) {
      loaded.vocab = *base;
      loaded.corpus.num_terms =
          std::max(loaded.corpus.num_terms, loaded.vocab.size());
    } else {
      loaded.vocab = numeric_vocabulary(loaded.corpus.num_terms);
    }
  }
  return loaded;
}

// Drops tokens outside the trained vocabulary; doc indices stay stable.
Corpus restrict_to_vocabulary(const Corpus& corpus, int num_terms,
                              long long* dropped) {
  Corpus out;
  out.num_terms = num_terms;
  for (const auto& doc : corpus.docs) {
    Document kept;
    for (int i = 0; i < doc.length(); ++i) {
      if (doc.terms[i] < num_terms) {
        kept.terms.push_back(doc.terms[i]);
        kept.counts.push_back(doc.counts[i]);
        kept.total += doc.counts[i];
      } else if (dropped != nullptr) {
        *dropped += doc.counts[i];
      }
    }
    out.docs.push_back(std::move(kept));
  }
  return out;
}

// --- Gibbs model directory layout ----------------------------------------
//
//   wordmap.txt          term <-> id map
//   training.dat         sparse copy of the training corpus
//   model-final.other    hyperparameters, sizes, global iteration, seed
//   model-final.tassign  topic assignment per token
//   model-final.theta    M x K doc-topic matrix
//   model-final.phi      K x V topic-word matrix
//   model-final.twords   top words per topic (when requested)
//   model-NNN.*          checkpoints in the same shape

struct GibbsModelDir {
  GibbsMeta meta;
  Vocabulary vocab;
  Corpus corpus;
  GibbsState state;
};

std::string model_path(const std::string& dir, const std::string& name,
                       const std::string& suffix) {
  return (fs::path(dir) / ("model-" + name + suffix)).string();
}

GibbsModelDir load_gibbs_model(const std::string& dir) {
  GibbsModelDir model;
  {
    auto in = open_input(model_path(dir, "final", ".other"));
    model.meta = read_gibbs_meta(in);
  }
  {
    auto in = open_input((fs::path(dir) / "wordmap.txt").string());
    model.vocab = read_wordmap(in);
  }
  {
    auto in = open_input((fs::path(dir) / "training.dat").string());
    model.corpus = parse_sparse_corpus(in);
  }
  if (model.corpus.num_terms > model.meta.num_terms) {
    throw std::runtime_error(dir + ": training.dat exceeds recorded num_terms");
  }
  model.corpus.num_terms = model.meta.num_terms;
  {
    auto in = open_input(model_path(dir, "final", ".tassign"));
    model.state = state_from_tassign(
        in, model.corpus,
        {model.meta.num_topics, model.meta.alpha, model.meta.beta},
        model.meta.seed);
  }
  return model;
}

void save_gibbs_checkpoint(const std::string& dir, const std::string& name,
                           const GibbsState& state, const Corpus& corpus,
                           const Vocabulary& vocab, int iterations,
                           int twords_n, std::ostream& err) {
  {
    auto out = open_output(model_path(dir, name, ".tassign"));
    write_tassign(out, corpus, state.z);
  }
  {
    auto out = open_output(model_path(dir, name, ".theta"));
    write_matrix(out, estimate_theta(state));
  }
  {
    auto out = open_output(model_path(dir, name, ".phi"));
    write_matrix(out, estimate_phi(state));
  }
  if (twords_n > 0) {
    auto out = open_output(model_path(dir, name, ".twords"));
    const int written = write_twords(out, estimate_phi(state), vocab, twords_n);
    if (written < twords_n) {
      err << "warning: twords clamped to vocabulary size " << written << "\n";
    }
  }
  GibbsMeta meta;
  meta.alpha = state.hyper.alpha;
  meta.beta = state.hyper.beta;
  meta.num_topics = state.num_topics();
  meta.num_docs = corpus.num_docs();
  meta.num_terms = corpus.num_terms;
  meta.iterations = iterations;
  meta.seed = state.seed;
  auto out = open_output(model_path(dir, name, ".other"));
  write_gibbs_meta(out, meta);
}

void emit_ranked(const RankedList& list, std::ostream& out) {
  for (const auto& item : list) {
    out << item.id << '\t' << fixed(item.score, 6) << '\n';
  }
}

// --- verbs ----------------------------------------------------------------

struct TrainGibbsArgs {
  std::string data;
  Format format = Format::kLine;
  int k = 0;
  double alpha = -1.0;
  double beta = -1.0;
  int iters = 200;
  int burnin = 0;
  int workers = 1;
  Scheme scheme = Scheme::kSerial;
  int partition_trials = 10;
  std::uint64_t seed = kDefaultSeed;
  int save_every = 0;
  int twords = 0;
  std::string out;
  std::string wordmap;
  bool resume = false;
  bool verbose = false;
};

int train_gibbs(const TrainGibbsArgs& args, std::ostream&, std::ostream& err) {
  prepare_directory(args.out);

  Corpus corpus;
  Vocabulary vocab;
  GibbsState state;
  int first_iteration = 0;

  if (args.resume) {
    GibbsModelDir model = load_gibbs_model(args.out);
    corpus = std::move(model.corpus);
    vocab = std::move(model.vocab);
    state = std::move(model.state);
    first_iteration = model.meta.iterations;
  } else {
    std::optional<Vocabulary> base;
    if (!args.wordmap.empty()) {
      auto in = open_input(args.wordmap);
      base = read_wordmap(in);
    }
    LoadedCorpus loaded =
        load_corpus(args.data, args.format, base ? &*base : nullptr);
    corpus = std::move(loaded.corpus);
    vocab = std::move(loaded.vocab);
    {
      auto out = open_output((fs::path(args.out) / "wordmap.txt").string());
      write_wordmap(out, vocab);
    }
    {
      auto out = open_output((fs::path(args.out) / "training.dat").string());
      write_sparse_corpus(out, corpus);
    }
    state = init_state(corpus, {args.k, args.alpha, args.beta}, args.seed);
  }

  BlockPlan plan;
  if (args.scheme == Scheme::kBlocked) {
    plan = partition_blocks(corpus, args.workers, args.partition_trials,
                            state.seed);
    if (args.verbose) {
      err << "block plan balance (max-min tokens): " << plan.balance << "\n";
    }
  }

  const int total = args.burnin + args.iters;
  for (int t = first_iteration; t < first_iteration + total; ++t) {
    switch (args.scheme) {
      case Scheme::kSerial:
        sweep(state, corpus, t);
        break;
      case Scheme::kAdlda:
        adlda_sweep(state, corpus, args.workers, t);
        break;
      case Scheme::kBlocked:
        blocked_sweep(state, corpus, plan, t);
        break;
    }
    const int done = t + 1;
    if (args.verbose) err << "iteration " << done << "\n";
    const int done_local = done - first_iteration;
    if (args.save_every > 0 && done_local % args.save_every == 0 &&
        done_local < total) {
      save_gibbs_checkpoint(args.out, zero_padded(done), state, corpus, vocab,
                            done, args.twords, err);
    }
  }
  save_gibbs_checkpoint(args.out, "final", state, corpus, vocab,
                        first_iteration + total, args.twords, err);
  return 0;
}

struct TrainVemArgs {
  std::string data;
  Format format = Format::kSparse;
  int k = 0;
  double alpha = -1.0;
  std::string settings_path;
  std::string init = "random";
  std::uint64_t seed = kDefaultSeed;
  int lag = 5;
  int num_init = 1;
  int threads = 1;
  std::string out;
  bool alpha_given = false;
  bool verbose = false;
};

int train_vem(const TrainVemArgs& args, std::ostream&, std::ostream& err) {
  prepare_directory(args.out);

  LoadedCorpus loaded = load_corpus(args.data, args.format);
  if (args.format == Format::kLine) {
    auto out = open_output((fs::path(args.out) / "wordmap.txt").string());
    write_wordmap(out, loaded.vocab);
  }

  VemSettings settings;
  if (!args.settings_path.empty()) {
    auto in = open_input(args.settings_path);
    settings = parse_settings(in);
  }
  if (settings.estimate_alpha && args.alpha_given) {
    err << "warning: settings request alpha estimation; --alpha only sets "
           "the initial value\n";
  }

  VemInit init;
  init.num_init = args.num_init;
  if (args.init == "random") {
    init.mode = VemInit::Mode::kRandom;
  } else if (args.init == "seeded") {
    init.mode = VemInit::Mode::kSeeded;
  } else {
    init.mode = VemInit::Mode::kFromModel;
    init.model = load_vem_model(args.init);
  }

  const double initial_alpha = args.alpha > 0 ? args.alpha : 50.0 / args.k;
  const VemModel model0 =
      initial_model(loaded.corpus, args.k, initial_alpha, init, args.seed);
  write_vem_model(model0, (fs::path(args.out) / "000").string());

  VemInit from0;
  from0.mode = VemInit::Mode::kFromModel;
  from0.model = model0;

  const auto checkpoint = [&](int iter, const VemModel& model,
                              const Grid<double>& gammas) {
    if (args.lag > 0 && iter % args.lag == 0) {
      write_vem_model(model, gammas,
                      (fs::path(args.out) / zero_padded(iter)).string());
    }
  };

  RunEmResult result =
      run_em(loaded.corpus, args.k, initial_alpha, settings, from0, args.seed,
             args.threads, checkpoint, args.verbose ? &err : nullptr);

  write_vem_model(result.model, result.gammas,
                  (fs::path(args.out) / "final").string());
  {
    auto out = open_output((fs::path(args.out) / "likelihood.dat").string());
    write_likelihood_trace(out, result.trace);
  }
  {
    // Final inference pass for the per-word argmax topics.
    VemInferResult inferred = vem_infer(result.model, loaded.corpus, settings);
    auto out =
        open_output((fs::path(args.out) / "word-assignments.dat").string());
    write_word_assignments(out, loaded.corpus, inferred.docs);
  }
  return 0;
}

struct InferVemArgs {
  std::string model;
  std::string data;
  Format format = Format::kSparse;
  std::string name;
  std::string settings_path;
};

int infer_vem(const InferVemArgs& args, std::ostream&, std::ostream&) {
  const VemModel model = load_vem_model(args.model);
  VemSettings settings;
  if (!args.settings_path.empty()) {
    auto in = open_input(args.settings_path);
    settings = parse_settings(in);
  }
  LoadedCorpus loaded = load_corpus(args.data, args.format);
  loaded.corpus.num_terms =
      std::max(loaded.corpus.num_terms, model.num_terms());

  const VemInferResult result = vem_infer(model, loaded.corpus, settings);
  {
    auto out = open_output(args.name + "-gamma.dat");
    write_matrix(out, result.gammas(), 10);
  }
  {
    auto out = open_output(args.name + "-lda-lhood.dat");
    write_doc_likelihoods(out, result.likelihoods);
  }
  return 0;
}

struct InferGibbsArgs {
  std::string model;
  std::string data;
  Format format = Format::kLine;
  int iters = 20;
  std::uint64_t seed = kDefaultSeed;
  bool strict = false;
  std::string out;
};

int infer_gibbs(const InferGibbsArgs& args, std::ostream&, std::ostream& err) {
  GibbsModelDir model = load_gibbs_model(args.model);
  LoadedCorpus newdocs = load_corpus(args.data, args.format, &model.vocab);

  prepare_directory(args.out);
  InferResult result = infer_new(model.state, newdocs.corpus,
                                 {args.iters, args.strict}, args.seed);
  if (result.skipped_tokens > 0) {
    err << "warning: skipped " << result.skipped_tokens
        << " out-of-vocabulary tokens\n";
  }
  auto out = open_output((fs::path(args.out) / "inferred.theta").string());
  write_matrix(out, result.theta);
  return 0;
}

struct PerplexityArgs {
  std::string model;
  std::string data;
  Format format = Format::kLine;
  int iters = 20;
  std::uint64_t seed = kDefaultSeed;
};

int perplexity_cmd(const PerplexityArgs& args, std::ostream& out,
                   std::ostream& err) {
  GibbsModelDir model = load_gibbs_model(args.model);
  LoadedCorpus heldout = load_corpus(args.data, args.format, &model.vocab);

  long long dropped = 0;
  const Corpus evaluable = restrict_to_vocabulary(
      heldout.corpus, model.meta.num_terms, &dropped);
  if (dropped > 0) {
    err << "warning: " << dropped
        << " out-of-vocabulary tokens excluded from perplexity\n";
  }
  InferResult inferred =
      infer_new(model.state, evaluable, {args.iters, false}, args.seed);
  const double value =
      perplexity(inferred.theta, estimate_phi(model.state), evaluable);
  out << fixed(value, 6) << '\n';
  return 0;
}

struct RankArgs {
  std::string model;
  int doc = 0;
  int top_n = 10;
  DistanceMetric metric = DistanceMetric::kHellingerSq;
  double weight_doc = 0.5;
  double weight_word = 0.5;
  std::string out;
};

int with_ranked_output(const RankArgs& args, std::ostream& out,
                       const RankedList& list) {
  if (!args.out.empty()) {
    auto file = open_output(args.out);
    emit_ranked(list, file);
  } else {
    emit_ranked(list, out);
  }
  return 0;
}

int similar_cmd(const RankArgs& args, std::ostream& out, std::ostream&) {
  auto in = open_input(model_path(args.model, "final", ".theta"));
  const Grid<double> theta = read_matrix(in);
  return with_ranked_output(args, out,
                            similar_docs(theta, args.doc, args.top_n));
}

int tags_cmd(const RankArgs& args, std::ostream& out, std::ostream&) {
  Grid<double> theta, phi;
  {
    auto in = open_input(model_path(args.model, "final", ".theta"));
    theta = read_matrix(in);
  }
  {
    auto in = open_input(model_path(args.model, "final", ".phi"));
    phi = read_matrix(in);
  }
  Vocabulary vocab;
  {
    auto in = open_input((fs::path(args.model) / "wordmap.txt").string());
    vocab = read_wordmap(in);
  }
  if (args.doc < 0 || args.doc >= static_cast<int>(theta.rows())) {
    throw std::runtime_error("doc index out of range");
  }
  const auto tags = auto_tags({theta.row(args.doc), theta.cols()}, phi, vocab,
                              std::min(args.top_n, vocab.size()));
  for (const auto& [term, prob] : tags) {
    out << term << ' ' << fixed(prob, 6) << '\n';
  }
  return 0;
}

int topic_rank_cmd(const RankArgs& args, std::ostream& out, std::ostream&) {
  GibbsModelDir model = load_gibbs_model(args.model);
  return with_ranked_output(
      args, out,
      topic_rank(model.state, {args.weight_doc, args.weight_word},
                 args.metric));
}

int word_rank_cmd(const RankArgs& args, std::ostream& out, std::ostream&) {
  GibbsModelDir model = load_gibbs_model(args.model);
  return with_ranked_output(args, out, word_rank(model.state, args.metric));
}

int doc_quality_cmd(const RankArgs& args, std::ostream& out, std::ostream&) {
  GibbsModelDir model = load_gibbs_model(args.model);
  return with_ranked_output(
      args, out,
      doc_quality(model.state, make_topic_model(model.state), model.corpus));
}

struct ConvertArgs {
  std::string in;
  Format from = Format::kLine;
  Format to = Format::kSparse;
  std::string out;
  std::string wordmap;
};

int convert_cmd(const ConvertArgs& args, std::ostream&, std::ostream&) {
  std::optional<Vocabulary> base;
  if (!args.wordmap.empty() && args.from == Format::kSparse) {
    auto in = open_input(args.wordmap);
    base = read_wordmap(in);
  }
  LoadedCorpus loaded =
      load_corpus(args.in, args.from, base ? &*base : nullptr);

  auto out = open_output(args.out);
  if (args.to == Format::kSparse) {
    write_sparse_corpus(out, loaded.corpus);
    if (!args.wordmap.empty() && args.from == Format::kLine) {
      auto wm = open_output(args.wordmap);
      write_wordmap(wm, loaded.vocab);
    }
  } else {
    write_line_corpus(out, loaded.corpus, loaded.vocab);
  }
  return 0;
}

// Positional invocation kept for compatibility with the reference tooling:
//   est [alpha] [k] [settings] [data] [random/seeded/*] [directory]
//   inf [settings] [model] [data] [name]
std::vector<std::string> rewrite_compat(std::vector<std::string> args) {
  if (args.empty()) return args;
  if (args[0] == "est" && args.size() == 7) {
    return {"train-vem",  "--alpha", args[1], "--k",    args[2],
            "--settings", args[3],   "--data", args[4], "--init",
            args[5],      "--out",   args[6]};
  }
  if (args[0] == "inf" && args.size() == 5) {
    return {"infer-vem", "--settings", args[1], "--model", args[2],
            "--data",    args[3],      "--name", args[4]};
  }
  return args;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  args = rewrite_compat(std::move(args));

  CLI::App app{"LDA topic modeling: collapsed Gibbs and variational EM "
               "trainers, inference, evaluation and model analytics"};
  app.require_subcommand(1);

  const auto format_opt = CLI::CheckedTransformer(kFormatNames);
  const auto scheme_opt = CLI::CheckedTransformer(kSchemeNames);
  const auto metric_opt = CLI::CheckedTransformer(kMetricNames);

  TrainGibbsArgs tg;
  auto* tg_cmd = app.add_subcommand("train-gibbs",
                                    "Train with collapsed Gibbs sampling");
  tg_cmd->add_option("--data", tg.data, "corpus file")->required();
  tg_cmd->add_option("--format", tg.format, "line|sparse")
      ->transform(format_opt);
  tg_cmd->add_option("--k", tg.k, "topic count")->required();
  tg_cmd->add_option("--alpha", tg.alpha, "doc-side smoothing, default 50/K");
  tg_cmd->add_option("--beta", tg.beta, "word-side smoothing, default 0.1");
  tg_cmd->add_option("--iters", tg.iters, "sweeps, default 200");
  tg_cmd->add_option("--burnin", tg.burnin, "extra sweeps before the counted ones");
  tg_cmd->add_option("--workers", tg.workers, "parallel workers P");
  tg_cmd->add_option("--scheme", tg.scheme, "serial|adlda|blocked")
      ->transform(scheme_opt);
  tg_cmd->add_option("--partition-trials", tg.partition_trials,
                     "block-plan permutation trials");
  tg_cmd->add_option("--seed", tg.seed)->envname("LDAKIT_SEED");
  tg_cmd->add_option("--save-every", tg.save_every, "checkpoint cadence");
  tg_cmd->add_option("--twords", tg.twords, "top words per topic to report");
  tg_cmd->add_option("--out", tg.out, "model directory")->required();
  tg_cmd->add_option("--wordmap", tg.wordmap,
                     "existing wordmap for sparse input");
  tg_cmd->add_flag("--resume", tg.resume, "continue from --out");
  tg_cmd->add_flag("--verbose", tg.verbose);

  TrainVemArgs tv;
  auto* tv_cmd =
      app.add_subcommand("train-vem", "Train with variational EM");
  tv_cmd->add_option("--data", tv.data, "corpus file")->required();
  tv_cmd->add_option("--format", tv.format, "line|sparse")
      ->transform(format_opt);
  tv_cmd->add_option("--k", tv.k, "topic count")->required();
  auto* tv_alpha =
      tv_cmd->add_option("--alpha", tv.alpha, "initial alpha, default 50/K");
  tv_cmd->add_option("--settings", tv.settings_path, "settings.txt");
  tv_cmd->add_option("--init", tv.init, "random|seeded|<model prefix>");
  tv_cmd->add_option("--seed", tv.seed)->envname("LDAKIT_SEED");
  tv_cmd->add_option("--lag", tv.lag, "checkpoint every LAG EM iterations");
  tv_cmd->add_option("--num-init", tv.num_init, "seeded docs per topic");
  tv_cmd->add_option("--threads", tv.threads, "E-step worker threads");
  tv_cmd->add_option("--out", tv.out, "model directory")->required();
  tv_cmd->add_flag("--verbose", tv.verbose);

  InferVemArgs iv;
  auto* iv_cmd = app.add_subcommand("infer-vem",
                                    "Variational inference on new documents");
  iv_cmd->add_option("--model", iv.model, "model prefix, e.g. dir/final")
      ->required();
  iv_cmd->add_option("--data", iv.data)->required();
  iv_cmd->add_option("--format", iv.format, "line|sparse")
      ->transform(format_opt);
  iv_cmd->add_option("--name", iv.name, "output prefix")->required();
  iv_cmd->add_option("--settings", iv.settings_path);

  InferGibbsArgs ig;
  auto* ig_cmd =
      app.add_subcommand("infer-gibbs", "Gibbs inference on new documents");
  ig_cmd->add_option("--model", ig.model, "model directory")->required();
  ig_cmd->add_option("--data", ig.data)->required();
  ig_cmd->add_option("--format", ig.format, "line|sparse")
      ->transform(format_opt);
  ig_cmd->add_option("--iters", ig.iters, "sampling passes, default 20");
  ig_cmd->add_option("--seed", ig.seed)->envname("LDAKIT_SEED");
  ig_cmd->add_flag("--strict", ig.strict,
                   "error on out-of-vocabulary tokens");
  ig_cmd->add_option("--out", ig.out, "output directory")->required();

  PerplexityArgs px;
  auto* px_cmd =
      app.add_subcommand("perplexity", "Held-out perplexity of a Gibbs model");
  px_cmd->add_option("--model", px.model, "model directory")->required();
  px_cmd->add_option("--data", px.data, "held-out corpus")->required();
  px_cmd->add_option("--format", px.format, "line|sparse")
      ->transform(format_opt);
  px_cmd->add_option("--iters", px.iters);
  px_cmd->add_option("--seed", px.seed)->envname("LDAKIT_SEED");

  RankArgs sim, tag, trank, wrank, dq;
  auto* sim_cmd = app.add_subcommand("similar", "Most similar documents");
  sim_cmd->add_option("--model", sim.model)->required();
  sim_cmd->add_option("--doc", sim.doc)->required();
  sim_cmd->add_option("--top", sim.top_n);
  sim_cmd->add_option("--out", sim.out, "write TSV here instead of stdout");

  auto* tag_cmd = app.add_subcommand("tags", "Auto-tags for one document");
  tag_cmd->add_option("--model", tag.model)->required();
  tag_cmd->add_option("--doc", tag.doc)->required();
  tag_cmd->add_option("--top", tag.top_n);

  auto* trank_cmd = app.add_subcommand("topic-rank", "Rank topics");
  trank_cmd->add_option("--model", trank.model)->required();
  trank_cmd->add_option("--metric", trank.metric)->transform(metric_opt);
  trank_cmd->add_option("--weight-doc", trank.weight_doc);
  trank_cmd->add_option("--weight-word", trank.weight_word);
  trank_cmd->add_option("--out", trank.out);

  auto* wrank_cmd = app.add_subcommand("word-rank", "Rank words");
  wrank_cmd->add_option("--model", wrank.model)->required();
  wrank_cmd->add_option("--metric", wrank.metric)->transform(metric_opt);
  wrank_cmd->add_option("--out", wrank.out);

  auto* dq_cmd = app.add_subcommand("doc-quality", "Score document quality");
  dq_cmd->add_option("--model", dq.model)->required();
  dq_cmd->add_option("--out", dq.out);

  ConvertArgs cv;
  auto* cv_cmd =
      app.add_subcommand("convert", "Convert between corpus formats");
  cv_cmd->add_option("--in", cv.in)->required();
  cv_cmd->add_option("--from", cv.from, "line|sparse")
      ->required()
      ->transform(format_opt);
  cv_cmd->add_option("--to", cv.to, "line|sparse")
      ->required()
      ->transform(format_opt);
  cv_cmd->add_option("--out", cv.out)->required();
  cv_cmd->add_option("--wordmap", cv.wordmap,
                     "wordmap to read (sparse input) or write (line input)");

  std::vector<const char*> argv;
  argv.push_back("lda");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    err << app.help();
    return e.get_exit_code();
  }

  try {
    if (tg_cmd->parsed()) return train_gibbs(tg, out, err);
    if (tv_cmd->parsed()) {
      tv.alpha_given = tv_alpha->count() > 0;
      return train_vem(tv, out, err);
    }
    if (iv_cmd->parsed()) return infer_vem(iv, out, err);
    if (ig_cmd->parsed()) return infer_gibbs(ig, out, err);
    if (px_cmd->parsed()) return perplexity_cmd(px, out, err);
    if (sim_cmd->parsed()) return similar_cmd(sim, out, err);
    if (tag_cmd->parsed()) return tags_cmd(tag, out, err);
    if (trank_cmd->parsed()) return topic_rank_cmd(trank, out, err);
    if (wrank_cmd->parsed()) return word_rank_cmd(wrank, out, err);
    if (dq_cmd->parsed()) return doc_quality_cmd(dq, out, err);
    if (cv_cmd->parsed()) return convert_cmd(cv, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 1;
}

int run(std::vector<std::string> args) {
  return run(std::move(args), std::cout, std::cerr);
}

}  // namespace ldakit::cli
