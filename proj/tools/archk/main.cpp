// archk: covariance functions and GP regression over conditional parameter
// spaces. Subcommands operate on JSON space/kernel files and CSV datasets;
// every artifact embeds a run manifest so outputs are reproducible byte for
// byte given the same inputs and seed.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "archk/digest.hpp"
#include "archk/errors.hpp"
#include "archk/gp.hpp"
#include "archk/io.hpp"
#include "archk/kernel.hpp"
#include "archk/metric.hpp"
#include "archk/rng.hpp"
#include "archk/space.hpp"
#include "archk/verify.hpp"
#include "archk/version.hpp"

namespace {

using njson = nlohmann::ordered_json;
using namespace archk;

// Set by subcommands that finish their work but report a failed check.
int g_status = 0;

enum class LogLevel { Off, Info, Debug };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* raw = std::getenv("ARCHK_LOG");
    if (raw == nullptr) return LogLevel::Off;
    const std::string value(raw);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    return LogLevel::Off;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::Info) std::cerr << "[archk] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[archk] " << message << "\n";
}

njson make_manifest(const std::string& subcommand,
                    std::vector<std::pair<std::string, std::string>> inputs,
                    std::optional<std::uint64_t> seed = std::nullopt,
                    const std::string& spec_digest = "",
                    const std::string& config_digest = "") {
  njson manifest;
  manifest["tool"] = "archk";
  manifest["version"] = kVersion;
  manifest["subcommand"] = subcommand;
  njson in = njson::object();
  for (auto& [key, path] : inputs) {
    if (!path.empty()) in[key] = path;
  }
  manifest["inputs"] = std::move(in);
  if (seed) manifest["seed"] = *seed;
  if (!spec_digest.empty()) manifest["spec_digest"] = spec_digest;
  if (!config_digest.empty()) manifest["config_digest"] = config_digest;
  return manifest;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    log_info("wrote " + out_path);
  }
}

std::string digest_of_spec(const KernelSpec& spec) {
  return fnv1a_hex(canonical_spec_line(spec));
}

std::string digest_of_configs(const ParamSpace& space, const std::vector<Config>& configs) {
  Fnv1a hash;
  for (const Config& config : configs) {
    hash.update(canonical_config_line(space, config));
    hash.update("\n");
  }
  return hash.hex();
}

njson report_to_json(const ParamSpace& space, const CheckReport& report) {
  njson out;
  out["name"] = report.name;
  if (!report.dimension.empty()) out["dimension"] = report.dimension;
  out["samples"] = report.samples;
  out["worst"] = report.worst;
  out["tolerance"] = report.tolerance;
  out["pass"] = report.pass;
  out["detail"] = report.detail;
  njson witnesses = njson::array();
  for (const Config& config : report.witness) {
    witnesses.push_back(njson::parse(config_to_json(space, config)));
  }
  out["witness"] = std::move(witnesses);
  return out;
}

njson vector_to_json(const Eigen::VectorXd& values) {
  njson out = njson::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(values[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const njson& values, const std::string& context) {
  if (!values.is_array()) raise(Errc::ParseError, context + " must be an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number()) raise(Errc::ParseError, context + " must hold numbers only");
    out[static_cast<Eigen::Index>(i)] = values[i].get<double>();
  }
  return out;
}

// Model JSON written by fit/tune and consumed by predict: kernel settings,
// noise, and the training data itself, so prediction needs no extra files.
njson model_to_json(const njson& manifest, const GpModel& model) {
  const ParamSpace& space = model.spec().space();
  njson out;
  out["manifest"] = manifest;
  out["kernel"] = njson::parse(kernel_spec_to_json(model.spec()));
  out["noise_variance"] = model.noise_variance();
  out["jitter"] = model.jitter();
  out["lml"] = model.log_marginal_likelihood();
  out["n"] = model.train_size();
  return out;
}

struct CommonOpts {
  std::string space;
  std::string data;
  std::string spec;
  std::string out;
  std::string config;
  std::string model;
  std::string queries;
  std::string combination = "product";
  std::uint64_t seed = 0;
  std::uint64_t n = 1;
  std::uint64_t pairs = 64;
  std::uint64_t budget = 32;
  std::uint64_t m = 2;
  double noise = 0.0;
};

SpacePtr load_space(const std::string& path) {
  SpacePtr space = read_space_file(path);
  log_info("space '" + path + "': D=" + std::to_string(space->size()) +
           " roots=" + std::to_string(space->root_count()) +
           " depth=" + std::to_string(space->depth()));
  return space;
}

KernelSpec load_spec(const SpacePtr& space, const std::string& path) {
  KernelSpec spec = read_kernel_spec_file(space, path);
  log_debug("kernel settings digest " + digest_of_spec(spec));
  return spec;
}

Dataset require_targets(TableData&& table, const std::string& path) {
  if (!table.targets) {
    raise(Errc::EmptyInput, "data file '" + path + "' has no 'y' column");
  }
  return Dataset{std::move(table.configs), std::move(*table.targets)};
}

void cmd_validate(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  std::cout << "D=" << space->size() << " roots=" << space->root_count()
            << " depth=" << space->depth() << "\n";
}

void cmd_sample(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  Rng rng(opt.seed);
  std::vector<Config> configs;
  configs.reserve(opt.n);
  for (std::uint64_t i = 0; i < opt.n; ++i) configs.push_back(space->sample_config(rng));
  const njson manifest = make_manifest("sample", {{"space", opt.space}}, opt.seed, "",
                                       digest_of_configs(*space, configs));
  emit(opt.out, dataset_to_csv(*space, configs, nullptr, manifest.dump()));
}

void cmd_embed(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const KernelSpec spec = load_spec(space, opt.spec);
  const Config config = read_config_file(opt.config);
  const std::vector<BoundSlot> bound = space->bind(config);

  njson embeddings = njson::object();
  for (const std::size_t i : space->topological_order()) {
    embeddings[space->dimension(i).id] = vector_to_json(embed_dim(spec, i, bound));
  }
  njson out;
  out["manifest"] =
      make_manifest("embed", {{"space", opt.space}, {"spec", opt.spec}, {"config", opt.config}},
                    std::nullopt, digest_of_spec(spec), digest_of_configs(*space, {config}));
  out["embeddings"] = std::move(embeddings);
  emit(opt.out, out.dump(2) + "\n");
}

void cmd_gram(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const KernelSpec spec = load_spec(space, opt.spec);
  TableData table = read_dataset_file(*space, opt.data);
  const GramMatrix matrix = gram(spec, table.configs);
  log_debug("gram " + std::to_string(matrix.entries.rows()) + "x" +
            std::to_string(matrix.entries.cols()) + " config digest " + matrix.config_digest);
  const njson manifest =
      make_manifest("gram", {{"space", opt.space}, {"data", opt.data}, {"spec", opt.spec}},
                    std::nullopt, matrix.spec_digest, matrix.config_digest);
  emit(opt.out, matrix_to_csv(matrix.entries, manifest.dump()));
}

void cmd_psd(const CommonOpts& opt) {
  const Eigen::MatrixXd matrix = read_matrix_file(opt.data);
  const CheckReport report = check_psd(matrix);
  njson out;
  out["manifest"] = make_manifest("psd", {{"data", opt.data}});
  njson entry;
  entry["name"] = report.name;
  entry["samples"] = report.samples;
  entry["worst"] = report.worst;
  entry["tolerance"] = report.tolerance;
  entry["pass"] = report.pass;
  entry["detail"] = report.detail;  // minimum eigenvalue
  out["report"] = std::move(entry);
  emit(opt.out, out.dump(2) + "\n");
  if (!report.pass) g_status = 2;
}

void cmd_check(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const KernelSpec spec = load_spec(space, opt.spec);
  std::vector<CheckReport> reports = check_isometry(spec, opt.pairs, opt.seed);
  std::vector<CheckReport> triangle = check_triangle(spec, opt.pairs, opt.seed);
  reports.insert(reports.end(), std::make_move_iterator(triangle.begin()),
                 std::make_move_iterator(triangle.end()));

  std::string lines = make_manifest("check", {{"space", opt.space}, {"spec", opt.spec}},
                                    opt.seed, digest_of_spec(spec))
                          .dump() +
                      "\n";
  bool all_pass = true;
  for (const CheckReport& report : reports) {
    lines += report_to_json(*space, report).dump() + "\n";
    all_pass = all_pass && report.pass;
  }
  emit(opt.out, lines);
  if (!all_pass) g_status = 2;
}

void cmd_fit(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const KernelSpec spec = load_spec(space, opt.spec);
  const Dataset data = require_targets(read_dataset_file(*space, opt.data), opt.data);
  const GpModel model = GpModel::fit(spec, data, opt.noise);
  log_info("fit: n=" + std::to_string(model.train_size()) +
           " lml=" + format_double(model.log_marginal_likelihood()) +
           " jitter=" + format_double(model.jitter()));

  const njson manifest =
      make_manifest("fit", {{"space", opt.space}, {"data", opt.data}, {"spec", opt.spec}},
                    std::nullopt, digest_of_spec(model.spec()),
                    digest_of_configs(*space, data.configs));
  njson out = model_to_json(manifest, model);
  njson configs = njson::array();
  for (const Config& config : data.configs) {
    configs.push_back(njson::parse(config_to_json(*space, config)));
  }
  njson data_json;
  data_json["configs"] = std::move(configs);
  data_json["targets"] = vector_to_json(data.targets);
  out["data"] = std::move(data_json);
  emit(opt.out, out.dump(2) + "\n");
}

void cmd_predict(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const njson model_json = njson::parse(read_text_file(opt.model), nullptr, false);
  if (model_json.is_discarded() || !model_json.is_object()) {
    raise(Errc::ParseError, "model file: malformed JSON");
  }
  for (const char* key : {"kernel", "noise_variance", "data"}) {
    if (!model_json.contains(key)) {
      raise(Errc::ParseError, std::string("model file: missing key '") + key + "'");
    }
  }
  const KernelSpec spec = parse_kernel_spec_json(space, model_json["kernel"].dump());
  if (!model_json["noise_variance"].is_number()) {
    raise(Errc::ParseError, "model file: 'noise_variance' must be a number");
  }
  const njson& data_json = model_json["data"];
  if (!data_json.is_object() || !data_json.contains("configs") ||
      !data_json.contains("targets")) {
    raise(Errc::ParseError, "model file: 'data' needs 'configs' and 'targets'");
  }
  Dataset data;
  data.configs = parse_config_list_json(data_json["configs"].dump());
  data.targets = vector_from_json(data_json["targets"], "model file: 'targets'");

  const GpModel model =
      GpModel::fit(spec, data, model_json["noise_variance"].get<double>());
  const std::vector<Config> queries = read_dataset_file(*space, opt.queries).configs;
  const Prediction prediction = model.predict(queries);
  log_info("predict: " + std::to_string(queries.size()) + " queries, clamped " +
           std::to_string(prediction.clamped_count));

  njson out;
  out["manifest"] = make_manifest(
      "predict", {{"space", opt.space}, {"model", opt.model}, {"queries", opt.queries}},
      std::nullopt, digest_of_spec(spec), digest_of_configs(*space, queries));
  out["mean"] = vector_to_json(prediction.mean);
  out["variance"] = vector_to_json(prediction.variance);
  out["clamped_count"] = prediction.clamped_count;
  emit(opt.out, out.dump(2) + "\n");
}

void cmd_tune(const CommonOpts& opt) {
  const SpacePtr space = load_space(opt.space);
  const Dataset data = require_targets(read_dataset_file(*space, opt.data), opt.data);
  Combination combination;
  if (opt.combination == "sum") {
    combination = Combination::Sum;
  } else if (opt.combination == "product") {
    combination = Combination::Product;
  } else {
    raise(Errc::ParseError, "--combination must be 'sum' or 'product'");
  }
  const TuneResult result = tune(space, data, opt.budget, opt.seed, combination);
  const GpModel model = GpModel::fit(result.spec, data, result.noise_variance);
  log_info("tune: evaluated=" + std::to_string(result.evaluated) +
           " failed=" + std::to_string(result.failed) +
           " best lml=" + format_double(result.lml));

  const njson manifest =
      make_manifest("tune", {{"space", opt.space}, {"data", opt.data}}, opt.seed,
                    digest_of_spec(result.spec), digest_of_configs(*space, data.configs));
  njson out = model_to_json(manifest, model);
  njson configs = njson::array();
  for (const Config& config : data.configs) {
    configs.push_back(njson::parse(config_to_json(*space, config)));
  }
  njson data_json;
  data_json["configs"] = std::move(configs);
  data_json["targets"] = vector_to_json(data.targets);
  out["data"] = std::move(data_json);
  njson stats;
  stats["candidate_index"] = result.candidate_index;
  stats["evaluated"] = result.evaluated;
  stats["failed"] = result.failed;
  out["tune"] = std::move(stats);
  emit(opt.out, out.dump(2) + "\n");
}

void cmd_rho_star(const CommonOpts& opt) {
  const double balance = rho_star_squared_norm(opt.m);
  const double crossover = rho_star_crossover(opt.m);
  std::cout << "rho_star squared-norm balance (m=" << opt.m
            << ") = " << format_double(balance) << "\n";
  std::cout << "rho_star metric crossover     (m=" << opt.m
            << ") = " << format_double(crossover) << "\n";
  std::cout << "note: the first equates sqrt(2)*rho with the squared norm of the raw "
               "category vector, the second equates the categorical distance itself with "
               "the activity-mismatch distance; the square-root denominator in the "
               "distance makes them differ.\n";
}

int exit_code_for(Errc code) {
  if (code == Errc::IoError) return 1;
  if (code == Errc::NotFactorizable || code == Errc::AllCandidatesFailed) return 3;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance functions and GP regression over conditional parameter spaces"};
  app.require_subcommand(1);
  CommonOpts opt;

  CLI::App* validate = app.add_subcommand("validate", "check a space file and print a summary");
  validate->add_option("--space", opt.space, "space JSON file")->required();
  validate->callback([&] { cmd_validate(opt); });

  CLI::App* sample = app.add_subcommand("sample", "draw valid configs, write them as CSV");
  sample->add_option("--space", opt.space, "space JSON file")->required();
  sample->add_option("--seed", opt.seed, "random seed (default 0)");
  sample->add_option("--n", opt.n, "number of configs (default 1)");
  sample->add_option("--out", opt.out, "output file (default stdout)");
  sample->callback([&] { cmd_sample(opt); });

  CLI::App* embed = app.add_subcommand("embed", "per-dimension embedding vectors of one config");
  embed->add_option("--space", opt.space, "space JSON file")->required();
  embed->add_option("--spec", opt.spec, "kernel settings JSON file")->required();
  embed->add_option("--config", opt.config, "config JSON file")->required();
  embed->add_option("--out", opt.out, "output file (default stdout)");
  embed->callback([&] { cmd_embed(opt); });

  CLI::App* gram_cmd = app.add_subcommand("gram", "kernel matrix of a config list, as CSV");
  gram_cmd->add_option("--space", opt.space, "space JSON file")->required();
  gram_cmd->add_option("--data", opt.data, "configs CSV file")->required();
  gram_cmd->add_option("--spec", opt.spec, "kernel settings JSON file")->required();
  gram_cmd->add_option("--out", opt.out, "output file (default stdout)");
  gram_cmd->callback([&] { cmd_gram(opt); });

  CLI::App* psd = app.add_subcommand("psd", "minimum-eigenvalue check of a matrix CSV");
  psd->add_option("--data", opt.data, "matrix CSV file")->required();
  psd->add_option("--out", opt.out, "output file (default stdout)");
  psd->callback([&] { cmd_psd(opt); });

  CLI::App* check = app.add_subcommand("check", "isometry and triangle-inequality checks");
  check->add_option("--space", opt.space, "space JSON file")->required();
  check->add_option("--spec", opt.spec, "kernel settings JSON file")->required();
  check->add_option("--pairs", opt.pairs, "sampled pairs/triples per dimension (default 64)");
  check->add_option("--seed", opt.seed, "random seed (default 0)");
  check->add_option("--out", opt.out, "output file (default stdout)");
  check->callback([&] { cmd_check(opt); });

  CLI::App* fit = app.add_subcommand("fit", "fit a GP model, write it as JSON");
  fit->add_option("--space", opt.space, "space JSON file")->required();
  fit->add_option("--data", opt.data, "dataset CSV file with a 'y' column")->required();
  fit->add_option("--spec", opt.spec, "kernel settings JSON file")->required();
  fit->add_option("--noise", opt.noise, "observation noise variance (default 0)");
  fit->add_option("--out", opt.out, "output file (default stdout)");
  fit->callback([&] { cmd_fit(opt); });

  CLI::App* predict = app.add_subcommand("predict", "posterior mean/variance at query configs");
  predict->add_option("--space", opt.space, "space JSON file")->required();
  predict->add_option("--model", opt.model, "model JSON file from fit or tune")->required();
  predict->add_option("--queries", opt.queries, "query configs CSV file")->required();
  predict->add_option("--out", opt.out, "output file (default stdout)");
  predict->callback([&] { cmd_predict(opt); });

  CLI::App* tune_cmd = app.add_subcommand("tune", "random-search hyperparameters, write best model");
  tune_cmd->add_option("--space", opt.space, "space JSON file")->required();
  tune_cmd->add_option("--data", opt.data, "dataset CSV file with a 'y' column")->required();
  tune_cmd->add_option("--budget", opt.budget, "candidates to evaluate (default 32)");
  tune_cmd->add_option("--seed", opt.seed, "random seed (default 0)");
  tune_cmd->add_option("--combination", opt.combination, "'sum' or 'product' (default product)");
  tune_cmd->add_option("--out", opt.out, "output file (default stdout)");
  tune_cmd->callback([&] { cmd_tune(opt); });

  CLI::App* rho_star = app.add_subcommand("rho-star", "balance points of the categorical distance");
  rho_star->add_option("--m", opt.m, "number of categories (>= 2)")->required();
  rho_star->callback([&] { cmd_rho_star(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const archk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_status;
}
