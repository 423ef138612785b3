#include "jcd/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "jcd/error.hpp"
#include "jcd/experiments.hpp"
#include "jcd/io.hpp"
#include "jcd/precoders.hpp"

namespace jcd {

namespace fs = std::filesystem;

namespace {

fs::path OutputDir(const std::string& flag, const std::string& command) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env) / command;
  return fs::path("jcd_out") / command;
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void PrintTable(std::ostream& out, const ScenarioResult& result) {
  out << std::left << std::setw(10) << "encoder";
  for (int k = 0; k < result.spec.users; ++k) out << std::setw(10) << ("I_" + std::to_string(k + 1));
  out << std::setw(10) << "min" << std::setw(10) << "mean" << "\n";
  for (const auto& row : result.rows) {
    out << std::setw(10) << row.encoder;
    if (!row.available) {
      for (int k = 0; k < result.spec.users + 2; ++k) out << std::setw(10) << "-";
      out << row.unavailable_reason << "\n";
      continue;
    }
    for (const auto& m : row.mi) out << std::setw(10) << Fixed(m.mi);
    out << std::setw(10) << Fixed(row.MinMi()) << std::setw(10) << Fixed(row.MeanMi()) << "\n";
  }
}

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> ParseSnrGrid(const std::string& text) {
  std::vector<double> grid;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(text);
      for (std::string p; std::getline(ss, p, ':');) parts.push_back(std::stod(p));
      if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw Error(ErrorCode::kValidationError, "SNR grid must be start:stop:step with step > 0");
      const auto steps = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
      for (int i = 0; i <= steps; ++i) grid.push_back(parts[0] + i * parts[2]);
    } else {
      std::stringstream ss(text);
      for (std::string p; std::getline(ss, p, ',');) grid.push_back(std::stod(p));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kValidationError, "cannot parse SNR grid '" + text + "'");
  }
  if (grid.empty()) throw Error(ErrorCode::kValidationError, "SNR grid is empty");
  return grid;
}

int CliMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint constellation design for the MU-MIMO broadcast channel", "jcd"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir;
  app.add_option("--out", out_dir, "output directory (default $JCD_OUTPUT_DIR/<command>)");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "evaluate MU-LP baselines and MAX-MIN on a scenario");
  std::string scenario_name;
  int seeds = 0;
  long long scenario_eval = 0;
  std::uint64_t scenario_seed = 0;
  bool scenario_seed_set = false;
  scenario->add_option("scenario", scenario_name, "builtin name or config file")->required();
  scenario->add_option("--seeds", seeds, "MAX-MIN restarts (best-of)")->check(CLI::PositiveNumber);
  scenario->add_option("--n-eval", scenario_eval, "evaluation samples per user");
  scenario->add_option("--seed", scenario_seed)->each([&](const std::string&) { scenario_seed_set = true; });

  // baseline
  auto* baseline = app.add_subcommand("baseline", "evaluate one MU-LP encoder");
  std::string encoder, baseline_scenario = "scenario1";
  long long baseline_eval = 0;
  baseline->add_option("--encoder", encoder)->required()->check(CLI::IsMember({"matched", "zf", "mmse"}));
  baseline->add_option("--scenario,--config", baseline_scenario, "builtin name or config file");
  baseline->add_option("--n-eval", baseline_eval);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "run MAX-MIN constellation learning");
  std::string config = "scenario1";
  std::uint64_t opt_seed = 0;
  bool opt_seed_set = false;
  int iterations = 0;
  long long n_samples = 0, opt_eval = 0;
  optimize->add_option("--config", config, "builtin name or config file");
  optimize->add_option("--seed", opt_seed)->each([&](const std::string&) { opt_seed_set = true; });
  optimize->add_option("--iterations", iterations);
  optimize->add_option("--n-samples", n_samples);
  optimize->add_option("--n-eval", opt_eval);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "complex-channel SNR sweep");
  SweepConfig sc;
  std::string grid = "-5:15:2";
  long long sweep_samples = 10000, sweep_eval = 20000;
  std::string convention = "paper";
  sweep->add_option("--snr", grid, "start:stop:step or comma list (dB)");
  sweep->add_option("--experiments", sc.experiments)->check(CLI::PositiveNumber);
  sweep->add_option("--restarts", sc.opt.restarts)->check(CLI::PositiveNumber);
  sweep->add_option("--users", sc.users)->check(CLI::PositiveNumber);
  sweep->add_option("--antennas", sc.antennas)->check(CLI::PositiveNumber);
  sweep->add_option("--iterations", sc.opt.max_iterations)->check(CLI::PositiveNumber);
  sweep->add_option("--n-samples", sweep_samples)->check(CLI::PositiveNumber);
  sweep->add_option("--n-eval", sweep_eval);
  sweep->add_option("--eta", sc.opt.eta);
  sweep->add_option("--seed", sc.opt.seed);
  sweep->add_option("--jitter", sc.jitter_std);
  sweep->add_option("--threads", sc.threads)->check(CLI::PositiveNumber);
  sweep->add_option("--convention", convention)->check(CLI::IsMember({"paper", "circular"}));

  // export
  auto* exporter = app.add_subcommand("export", "convert a constellation csv to csv or svg");
  std::string constellation_file, format = "svg", export_scenario, export_path;
  exporter->add_option("--constellation", constellation_file)->required();
  exporter->add_option("--format", format)->check(CLI::IsMember({"csv", "svg"}));
  exporter->add_option("--scenario,--config", export_scenario, "draw these channel directions");
  exporter->add_option("--output,-o", export_path, "output file");

  std::vector<const char*> argv{"jcd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[ParseError]: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*scenario) {
      ScenarioSpec spec = LoadScenario(scenario_name);
      if (seeds > 0) spec.opt.restarts = seeds;
      if (scenario_eval > 0) spec.opt.n_eval = static_cast<std::size_t>(scenario_eval);
      if (scenario_seed_set) spec.opt.seed = scenario_seed;
      const ScenarioResult result = RunScenario(spec);
      out << "scenario " << spec.name << " (convention " << ConventionName(spec.opt.kernel.convention)
          << ", n_eval " << spec.opt.n_eval << ")\n";
      PrintTable(out, result);
      const auto dir = OutputDir(out_dir, "scenario");
      WriteResults(BundleFromScenario(result), dir);
      out << "results written to " << dir.string() << "\n";
      return 0;
    }

    if (*baseline) {
      ScenarioSpec spec = LoadScenario(baseline_scenario);
      if (baseline_eval > 0) spec.opt.n_eval = static_cast<std::size_t>(baseline_eval);
      spec.encoders = {encoder};
      // Explicitly requested ZF on a rank-deficient channel is a failure, not a "-" row.
      RandomStream channel_rng(spec.opt.seed, {Label(StreamLabel::kChannel)});
      RandomStream snr_rng(spec.opt.seed, {Label(StreamLabel::kSnr)});
      const auto snr = ResolveSnr(spec.snr, spec.users, snr_rng);
      const ChannelSet channels = ResolveChannels(spec, snr, channel_rng);
      const EncoderRow row = EvaluateBaseline(encoder, channels, spec.Space(), spec.pc,
                                              spec.opt.n_eval,
                                              RandomStream(spec.opt.seed, {Label(StreamLabel::kEval)}),
                                              spec.opt.kernel);
      ScenarioResult result{spec, snr, channels, {row}};
      PrintTable(out, result);
      const auto dir = OutputDir(out_dir, "baseline");
      WriteResults(BundleFromScenario(result), dir);
      out << "results written to " << dir.string() << "\n";
      return 0;
    }

    if (*optimize) {
      ScenarioSpec spec = LoadScenario(config);
      if (opt_seed_set) spec.opt.seed = opt_seed;
      if (iterations > 0) spec.opt.max_iterations = iterations;
      if (n_samples > 0) spec.opt.n_samples = static_cast<std::size_t>(n_samples);
      if (opt_eval > 0) spec.opt.n_eval = static_cast<std::size_t>(opt_eval);
      spec.encoders = {kMaxMin};
      spec.Validate();
      RandomStream channel_rng(spec.opt.seed, {Label(StreamLabel::kChannel)});
      RandomStream snr_rng(spec.opt.seed, {Label(StreamLabel::kSnr)});
      const auto snr = ResolveSnr(spec.snr, spec.users, snr_rng);
      const ChannelSet channels = ResolveChannels(spec, snr, channel_rng);
      const RunResult run = OptimizeWithRestarts(channels, spec.Space(), spec.pc, spec.opt);
      out << "max-min run, seed " << spec.opt.seed << ", " << run.loss_history.size()
          << " iterations, final max-loss " << Fixed(run.loss_history.back().max_loss) << " bits\n";
      for (std::size_t k = 0; k < run.per_user_mi.size(); ++k)
        out << "  I_" << k + 1 << " = " << Fixed(run.per_user_mi[k].mi) << " +- "
            << Fixed(run.per_user_mi[k].std_error, 5) << "\n";
      out << "  min " << Fixed(run.MinMi()) << "  mean " << Fixed(run.MeanMi()) << "\n";
      const auto dir = OutputDir(out_dir, "optimize");
      WriteResults(BundleFromRun(run, spec, MeanOf(snr)), dir);
      out << "results written to " << dir.string() << "\n";
      return 0;
    }

    if (*sweep) {
      sc.snr_grid = ParseSnrGrid(grid);
      sc.opt.n_samples = static_cast<std::size_t>(sweep_samples);
      if (sweep_eval < 1000) throw Error(ErrorCode::kValidationError, "--n-eval must be >= 1000");
      sc.opt.n_eval = static_cast<std::size_t>(sweep_eval);
      sc.opt.kernel.convention = ParseConvention(convention);
      const SweepResult result = RunSweep(sc);
      out << std::left << std::setw(10) << "snr_db" << std::setw(10) << "encoder" << std::setw(12)
          << "mean_min" << std::setw(12) << "mean_mean" << "\n";
      for (const auto& a : result.aggregates) {
        out << std::setw(10) << Fixed(a.snr_db, 1) << std::setw(10) << a.encoder;
        if (a.experiments == 0)
          out << std::setw(12) << "-" << std::setw(12) << "-" << "\n";
        else
          out << std::setw(12) << Fixed(a.mean_min_mi) << std::setw(12) << Fixed(a.mean_mean_mi) << "\n";
      }
      const auto dir = OutputDir(out_dir, "sweep");
      WriteResults(BundleFromSweep(result), dir);
      out << "results written to " << dir.string() << "\n";
      return 0;
    }

    if (*exporter) {
      const LabeledConstellation lc = ReadConstellationCsv(constellation_file);
      fs::path path = export_path.empty()
                          ? fs::path(constellation_file).replace_extension(format == "svg" ? ".svg" : ".export.csv")
                          : fs::path(export_path);
      if (format == "svg") {
        std::vector<Eigen::VectorXd> dirs;
        if (!export_scenario.empty()) {
          const ScenarioSpec spec = LoadScenario(export_scenario);
          if (const auto* ex = std::get_if<ExplicitChannels>(&spec.channels))
            for (const auto& h : ex->h) dirs.push_back(h.col(0).real());
        }
        WriteFileAtomic(path, ConstellationSvg(lc.constellation, lc.labels, dirs));
      } else {
        std::string text = "w,antenna,re,im\n";
        const auto& x = lc.constellation.points();
        for (Eigen::Index j = 0; j < x.rows(); ++j)
          for (Eigen::Index t = 0; t < x.cols(); ++t)
            text += lc.labels[j] + "," + std::to_string(t) + "," + FormatNumber(x(j, t).real()) +
                    "," + FormatNumber(x(j, t).imag()) + "\n";
        WriteFileAtomic(path, text);
      }
      out << "wrote " << path.string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error[" << ErrorName(e.code()) << "]: " << e.what() << "\n";
    return IsNumericalFailure(e.code()) ? 2 : 1;
  }
  return 1;
}

}  // namespace jcd
