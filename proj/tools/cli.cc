// Copyright 2026 The kpgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kpgen/log.h"
#include "kpgen/pipeline.h"

namespace kpgen {
namespace {

struct Flags {
  bool no_references = false;
  bool no_pos = false;
  bool no_adjustment = false;
  bool include_present = false;
  bool json = false;
  bool per_document = false;
  bool quiet = false;
};

void add_options(CLI::App& app, PipelineConfig& c, Flags& f) {
  app.add_option("--corpus", c.corpus, "Input corpus (JSON Lines)");
  app.add_option("--vectors", c.vectors, "Word vectors (word2vec text format)");
  app.add_option("--bank", c.bank, "Phrase bank file");
  app.add_option("--checkpoint", c.checkpoint, "Model checkpoint");
  app.add_option("--output", c.output, "Output file; stdout when omitted");
  app.add_option("--predictions", c.predictions, "Predictions to evaluate");
  app.add_option("--validation", c.validation, "Validation corpus for tune-alpha");
  app.add_option("--reference-corpus", c.reference_corpus,
                 "Corpus for the overlap statistic");
  app.add_option("--lexicon", c.lexicon, "POS seed lexicon");

  app.add_flag("--update", c.update_bank, "Extend an existing bank");
  app.add_option("--min-df", c.min_df, "Minimum document frequency")->capture_default_str();
  app.add_flag("--raw-dot", c.raw_dot, "Uncapped dot-product similarity");

  app.add_option("--k-refs", c.retrieval.k, "References per document")->capture_default_str();
  app.add_option("--tau", c.retrieval.tau, "Retrieval score threshold")->capture_default_str();
  app.add_flag("--include-present", f.include_present,
               "Keep retrieved phrases that occur in the document");

  PhrasenessConfig& m = c.model;
  app.add_option("--enc-layers", m.enc_layers)->capture_default_str();
  app.add_option("--dec-layers", m.dec_layers)->capture_default_str();
  app.add_option("--d-model", m.d_model)->capture_default_str();
  app.add_option("--heads", m.heads)->capture_default_str();
  app.add_option("--pos-dim", m.pos_emb_dim)->capture_default_str();
  app.add_option("--ff-dim", m.ff_dim)->capture_default_str();
  app.add_option("--enc-vocab", m.enc_vocab)->capture_default_str();
  app.add_option("--dec-vocab", m.dec_vocab)->capture_default_str();
  app.add_option("--dropout", m.dropout)->capture_default_str();
  app.add_option("--max-src-len", m.max_src_len)->capture_default_str();
  app.add_option("--max-ref-len", m.max_ref_len)->capture_default_str();

  TrainSchedule& s = c.schedule;
  app.add_option("--epochs", s.epochs)->capture_default_str();
  app.add_option("--lr", s.learning_rate)->capture_default_str();
  app.add_option("--lr-decay", s.decay)->capture_default_str();
  app.add_option("--decay-every", s.decay_every)->capture_default_str();
  app.add_option("--clip-norm", s.clip_norm)->capture_default_str();
  app.add_option("--batch-size", s.batch_size)->capture_default_str();
  app.add_option("--mask-prob", c.mask_prob)->capture_default_str();

  DecodeConfig& d = c.decode;
  app.add_option("--lambda", d.lambda)->capture_default_str();
  app.add_option("--beta", d.beta)->capture_default_str();
  app.add_option("--alpha", d.alpha)->capture_default_str();
  app.add_option("--beam-size", d.beam_size)->capture_default_str();
  app.add_option("--beam-depth", d.beam_depth)->capture_default_str();
  app.add_option("--top-n", d.top_n, "Keyphrases per category")->capture_default_str();
  app.add_option("--alpha-grid", c.alpha_grid)->delimiter(',');

  app.add_flag("--no-references", f.no_references, "Empty reference block");
  app.add_flag("--no-pos", f.no_pos, "Disable POS features");
  app.add_flag("--no-adjustment", f.no_adjustment, "Disable position/bank adjustment");

  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--threads", c.threads, "Decoding threads; 0 = all cores")
      ->capture_default_str();
  app.add_flag("--json", f.json, "JSON report");
  app.add_flag("--per-document", f.per_document, "Per-document scores in JSON");
  app.add_flag("--quiet", f.quiet, "Suppress progress messages");
}

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string alpha_json(const AlphaSelection& a) {
  nlohmann::json j;
  j["alpha"] = a.alpha;
  j["grid"] = a.grid;
  j["geometric_means"] = a.geometric_means;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : a.metrics) rows.push_back(m);
  j["metrics"] = rows;
  return j.dump();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Unsupervised keyphrase generation", "kpgen");
  app.set_config("--config", "", "Key-value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  PipelineConfig config;
  Flags flags;
  add_options(app, config, flags);
  CLI::App* build_index = app.add_subcommand("build-index", "Build or update a phrase bank");
  CLI::App* train = app.add_subcommand("train", "Train the phraseness model");
  CLI::App* predict = app.add_subcommand("predict", "Generate keyphrases");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions");
  CLI::App* tune = app.add_subcommand("tune-alpha", "Select the length penalty");
  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  config.retrieval.exclude_present = !flags.include_present;
  config.decode.use_references = !flags.no_references;
  config.decode.use_pos = !flags.no_pos;
  config.decode.use_adjustment = !flags.no_adjustment;

  LogSink previous;
  bool sink_set = false;
  if (flags.quiet) {
    previous = set_log_sink([](LogLevel level, const std::string& msg) {
      if (level == LogLevel::kWarning) std::cerr << "warning: " << msg << '\n';
    });
    sink_set = true;
  }

  int status = 0;
  try {
    config.model.validate();
    config.decode.validate();

    std::ofstream file;
    if (!config.output.empty()) {
      file.open(config.output);
      if (!file) throw std::runtime_error("cannot write " + config.output.string());
    }
    std::ostream& sink = config.output.empty() ? out : file;

    if (build_index->parsed()) {
      const PhraseBank bank = run_build_index(config);
      sink << "phrases " << bank.size() << '\n';
    } else if (train->parsed()) {
      const TrainResult r = run_train(config);
      for (size_t e = 0; e < r.epoch_loss.size(); ++e) {
        sink << "epoch " << e + 1 << " loss " << format_double(r.epoch_loss[e]) << '\n';
      }
    } else if (predict->parsed()) {
      run_predict(config, sink);
    } else if (evaluate->parsed()) {
      const EvalReport report = run_evaluate(config);
      sink << (flags.json ? report_json(report, flags.per_document) + "\n"
                          : report_table(report));
    } else if (tune->parsed()) {
      sink << alpha_json(run_tune_alpha(config)) << '\n';
    } else if (stats->parsed()) {
      sink << stats_json(run_stats(config)) << '\n';
    }
    sink.flush();
    if (!sink) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    err << "kpgen: " << e.what() << '\n';
    status = 1;
  }
  if (sink_set) set_log_sink(previous);
  return status;
}

}  // namespace kpgen
