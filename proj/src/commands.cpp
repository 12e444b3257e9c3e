#include "curator/commands.hpp"

#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "curator/baselines.hpp"
#include "curator/error.hpp"
#include "curator/feature_io.hpp"
#include "curator/parallel.hpp"
#include "curator/report.hpp"
#include "curator/synthgen.hpp"

namespace curator {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string pool;
  std::string config;
  std::string out;
  std::string features;
  std::string forecasts;
  std::string result;
  std::string mode;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t jobs = 0;
  std::size_t k = 10;
  std::size_t snippets = 100;
  double bicycle_fraction = 0.0;
};

CurationConfig config_or_default(const Options& o) {
  return o.config.empty() ? default_config() : load_config(o.config);
}

FeatureTable features_for(const Options& o, const CurationConfig& config) {
  if (!o.features.empty()) return load_features(o.features);
  if (o.pool.empty()) throw InputError("need --features or --pool");
  return score_pool(load_pool(o.pool), config.measure, o.jobs);
}

void write_json(const fs::path& path, const Json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

int cmd_schema(const Options& o, std::ostream& out) {
  const std::string text = schema_json().dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out, text);
  }
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const fs::path path(o.out);
  if (o.mode == "random") {
    synth::RandomPoolOptions ro;
    ro.snippets = o.snippets;
    ro.bicycle_fraction = o.bicycle_fraction;
    save_pool(synth::random_pool(o.seed, ro), path);
    out << "wrote " << ro.snippets << " snippets to " << path.string() << "\n";
    return kExitOk;
  }
  if (o.config.empty()) throw InputError("synth needs --config <scenario spec> or --mode random");
  Json j;
  try {
    j = Json::parse(read_file(o.config));
  } catch (const Json::exception& e) {
    throw InputError(o.config + ": " + e.what());
  }
  auto spec = synth::spec_from_json(j);
  if (o.seed_given) spec.seed = o.seed;
  const auto generated = synth::generate_pool(spec);
  save_pool(generated.pool, path);
  Json cards = Json::array();
  for (const auto& c : generated.cards) cards.push_back(synth::to_json(c));
  const fs::path cards_path = path.parent_path() / "oracle_cards.json";
  write_json(cards_path, cards);
  out << "wrote " << generated.pool.snippets.size() << " snippets to " << path.string()
      << " and oracle cards to " << cards_path.string() << "\n";
  return kExitOk;
}

int cmd_score(const Options& o, std::ostream& out) {
  const auto config = config_or_default(o);
  const auto pool = load_pool(o.pool);
  const auto table = score_pool(pool, config.measure, o.jobs);
  save_features(table, o.out);
  std::size_t unrankable = 0;
  for (const auto& s : table.snippets) unrankable += s.vector.rankable ? 0 : 1;
  out << "scored " << table.snippets.size() << " snippets into " << o.out << "\n";
  if (unrankable > 0) {
    out << "warning: " << unrankable << " snippets failed map matching and are excluded from ranking\n";
  }
  return kExitOk;
}

void print_fulfillment(const CurationResult& r, std::ostream& out) {
  auto line = [&](const TaskSelection& t) {
    out << t.name << ": " << t.selected.size() << "/" << t.budget;
    if (t.shortfall() > 0) out << " (warning: short by " << t.shortfall() << ", pool exhausted)";
    out << "\n";
  };
  for (const auto& t : r.tasks) line(t);
  if (r.method == "curate") line(r.diverse);
}

int cmd_curate(const Options& o, std::ostream& out) {
  const auto config = config_or_default(o);
  const auto table = features_for(o, config);
  const auto result = curate(table, config, o.jobs);
  write_json(o.out, to_json(result));
  print_fulfillment(result, out);
  return kExitOk;
}

int cmd_baseline(const Options& o, std::ostream& out) {
  const auto config = config_or_default(o);
  const auto table = features_for(o, config);
  const auto candidates = make_candidates(table, config.normalization);
  CurationResult result;
  if (o.mode == "rn") {
    result = random_select(candidates, o.k, o.seed);
  } else if (o.mode == "al") {
    if (o.forecasts.empty()) throw InputError("--mode al requires --forecasts");
    const auto records = load_forecasts(o.forecasts);
    result = al_select(candidates, snippet_entropies(records), o.k);
  } else {
    throw InputError("unknown baseline mode: " + o.mode);
  }
  write_json(o.out, to_json(result));
  print_fulfillment(result, out);
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const auto config = config_or_default(o);
  const auto pool = load_pool(o.pool);
  Json j;
  try {
    j = Json::parse(read_file(o.result));
  } catch (const Json::exception& e) {
    throw InputError(o.result + ": " + e.what());
  }
  const auto problems = validate_result_json(j);
  if (!problems.empty()) throw InputError(o.result + ": " + problems.front());
  const auto result = result_from_json(j);
  std::optional<FeatureTable> table;
  if (!o.features.empty()) table = load_features(o.features);
  const auto report = build_report(pool, result, table ? &*table : nullptr, config.measure, o.jobs);
  fs::path csv(o.out);
  csv.replace_extension(".csv");
  write_json(o.out, to_json(report));
  write_file_atomic(csv, class_means_csv(report));
  out << "wrote " << o.out << " and " << csv.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scores driving-log snippets and curates a labeling set."};
  app.require_subcommand(1);
  Options o;
  o.jobs = default_jobs();

  auto jobs = [&](CLI::App* c) {
    c->add_option("--jobs", o.jobs, "worker threads (default: CURATOR_JOBS or all cores)")
        ->check(CLI::PositiveNumber);
  };
  auto* schema = app.add_subcommand("schema", "print the feature schema");
  schema->add_option("--out", o.out, "write to a file instead of stdout");

  auto* synth = app.add_subcommand("synth", "generate a synthetic pool");
  synth->add_option("--config", o.config, "scenario spec (JSON)");
  synth->add_option("--out", o.out, "pool file to write")->required();
  synth->add_option("--seed", o.seed, "overrides the spec seed");
  synth->add_option("--mode", o.mode, "'random' for a varied pool over every template")
      ->check(CLI::IsMember({"random"}));
  synth->add_option("--snippets", o.snippets, "random mode: pool size")->check(CLI::PositiveNumber);
  synth->add_option("--bicycle-fraction", o.bicycle_fraction, "random mode: share with a bicyclist")
      ->check(CLI::Range(0.0, 1.0));

  auto* score_cmd = app.add_subcommand("score", "compute snippet and frame features");
  score_cmd->add_option("--pool", o.pool, "pool file")->required();
  score_cmd->add_option("--config", o.config, "curation config (measure parameters)");
  score_cmd->add_option("--out", o.out, "output directory")->required();
  jobs(score_cmd);

  auto* curate_cmd = app.add_subcommand("curate", "select challenging and diverse snippets");
  curate_cmd->add_option("--features", o.features, "feature dump directory");
  curate_cmd->add_option("--pool", o.pool, "pool file, scored when --features is absent");
  curate_cmd->add_option("--config", o.config, "curation config");
  curate_cmd->add_option("--out", o.out, "result file")->required();
  jobs(curate_cmd);

  auto* baseline = app.add_subcommand("baseline", "random or entropy baseline selection");
  baseline->add_option("--mode", o.mode, "rn or al")->required()->check(CLI::IsMember({"rn", "al"}));
  baseline->add_option("--features", o.features, "feature dump directory");
  baseline->add_option("--pool", o.pool, "pool file, scored when --features is absent");
  baseline->add_option("--config", o.config, "curation config");
  baseline->add_option("--k", o.k, "number of snippets");
  baseline->add_option("--seed", o.seed, "rn seed");
  baseline->add_option("--forecasts", o.forecasts, "forecast file (al mode)");
  baseline->add_option("--out", o.out, "result file")->required();
  jobs(baseline);

  auto* report = app.add_subcommand("report", "label statistics of a selection");
  report->add_option("--pool", o.pool, "pool file")->required();
  report->add_option("--result", o.result, "curate or baseline result")->required();
  report->add_option("--features", o.features, "feature dump for histograms");
  report->add_option("--config", o.config, "curation config (measure parameters)");
  report->add_option("--out", o.out, "report JSON; the CSV goes next to it")->required();
  jobs(report);

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  o.seed_given = synth->count("--seed") > 0;

  try {
    if (*schema) return cmd_schema(o, out);
    if (*synth) return cmd_synth(o, out);
    if (*score_cmd) return cmd_score(o, out);
    if (*curate_cmd) return cmd_curate(o, out);
    if (*baseline) return cmd_baseline(o, out);
    if (*report) return cmd_report(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace curator
