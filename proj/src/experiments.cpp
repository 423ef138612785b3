#include "jcd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "jcd/error.hpp"
#include "jcd/precoders.hpp"

namespace jcd {

namespace {

bool IsKnownEncoder(const std::string& e) {
  return e == "mmse" || e == "zf" || e == "matched" || e == kMaxMin;
}

double MinOf(const std::vector<MiEstimate>& mi) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : mi) m = std::min(m, e.mi);
  return m;
}

double MeanOf(const std::vector<MiEstimate>& mi) {
  double s = 0.0;
  for (const auto& e : mi) s += e.mi;
  return s / static_cast<double>(mi.size());
}

std::vector<double> NoiseVars(std::span<const double> snr_db, double mean_power) {
  std::vector<double> out;
  for (double s : snr_db) out.push_back(NoiseVarFromSnr(s, mean_power));
  return out;
}

Eigen::MatrixXcd RandomChannel(int antennas, int rx, RandomStream& rng) {
  Eigen::MatrixXcd h(antennas, rx);
  for (int t = 0; t < antennas; ++t)
    for (int r = 0; r < rx; ++r) h(t, r) = rng.ComplexNormal(1.0);
  return h;
}

}  // namespace

void ScenarioSpec::Validate() const {
  if (antennas < 1 || users < 1 || rx < 1)
    throw Error(ErrorCode::kValidationError, "T, K and R must be positive");
  if (static_cast<int>(alphabet.size()) != users)
    throw Error(ErrorCode::kValidationError, "alphabet must list one size per user");
  Space();
  pc.Validate();
  opt.Validate();
  if (const auto* ex = std::get_if<ExplicitChannels>(&channels)) {
    if (static_cast<int>(ex->h.size()) != users)
      throw Error(ErrorCode::kValidationError, "channels: expected one matrix per user");
    for (const auto& h : ex->h)
      if (h.rows() != antennas || h.cols() != rx)
        throw Error(ErrorCode::kValidationError, "channels: each matrix must be T x R");
  }
  if (const auto* ex = std::get_if<ExplicitSnr>(&snr)) {
    if (static_cast<int>(ex->db.size()) != users)
      throw Error(ErrorCode::kValidationError, "snr: expected one value per user");
    for (double s : ex->db)
      if (!std::isfinite(s)) throw Error(ErrorCode::kValidationError, "snr: values must be finite");
  } else {
    const auto& j = std::get<JitteredSnr>(snr);
    if (!std::isfinite(j.mean) || !(j.jitter_std >= 0.0))
      throw Error(ErrorCode::kValidationError, "snr: invalid mean/jitter_std");
  }
  if (encoders.empty()) throw Error(ErrorCode::kValidationError, "encoders: list is empty");
  for (const auto& e : encoders)
    if (!IsKnownEncoder(e))
      throw Error(ErrorCode::kValidationError, "encoders: unknown encoder '" + e + "'");
}

std::vector<std::string> BuiltinScenarioNames() { return {"scenario1", "scenario2"}; }

ScenarioSpec BuiltinScenario(const std::string& name) {
  const double h = std::numbers::sqrt2 / 2.0;
  Eigen::MatrixXcd e1(2, 1), diag(2, 1);
  e1 << Complex{1.0, 0.0}, Complex{0.0, 0.0};
  diag << Complex{h, 0.0}, Complex{h, 0.0};

  ScenarioSpec spec;
  spec.name = name;
  spec.antennas = 2;
  spec.users = 2;
  spec.rx = 1;
  spec.alphabet = {2, 2};
  spec.snr = ExplicitSnr{{6.0, 8.0}};
  spec.pc = {1.0, 4.0};
  spec.opt.eta = 0.1;
  spec.opt.n_samples = 10000;
  spec.opt.max_iterations = 100;
  spec.opt.n_eval = 100000;
  spec.opt.real_constellation = true;
  if (name == "scenario1") {
    spec.channels = ExplicitChannels{{e1, diag}};
  } else if (name == "scenario2") {
    spec.channels = ExplicitChannels{{diag, diag}};
  } else {
    throw Error(ErrorCode::kUnknownScenario, "unknown scenario '" + name + "'");
  }
  return spec;
}

std::vector<double> ResolveSnr(const SnrSpec& snr, int users, RandomStream& rng) {
  if (const auto* ex = std::get_if<ExplicitSnr>(&snr)) return ex->db;
  const auto& j = std::get<JitteredSnr>(snr);
  std::vector<double> out;
  for (int k = 0; k < users; ++k) out.push_back(j.mean + j.jitter_std * rng.Normal());
  return out;
}

ChannelSet ResolveChannels(const ScenarioSpec& spec, std::span<const double> snr_db,
                           RandomStream& rng) {
  std::vector<Eigen::MatrixXcd> h;
  if (const auto* ex = std::get_if<ExplicitChannels>(&spec.channels)) {
    h = ex->h;
  } else {
    for (int k = 0; k < spec.users; ++k) h.push_back(RandomChannel(spec.antennas, spec.rx, rng));
  }
  return ChannelSet::FromMatrices(h, NoiseVars(snr_db, spec.pc.mean_power));
}

double EncoderRow::MinMi() const { return available ? MinOf(mi) : 0.0; }
double EncoderRow::MeanMi() const { return available ? MeanOf(mi) : 0.0; }
double SweepCell::MinMi() const { return available ? MinOf(mi) : 0.0; }
double SweepCell::MeanMi() const { return available ? MeanOf(mi) : 0.0; }

EncoderRow EvaluateBaseline(const std::string& encoder, const ChannelSet& channels,
                            const MessageSpace& space, const PowerConstraint& pc,
                            std::size_t n_eval, const RandomStream& eval_rng,
                            const DistanceKernel& kernel) {
  EncoderRow row;
  row.encoder = encoder;
  const EncodingMatrix enc = BuildEncoder(ParseEncoder(encoder), channels);
  row.constellation = BuildLinearConstellation(enc, space, pc);
  row.mi = EstimateMiAllUsers(*row.constellation, channels, space, n_eval, eval_rng, kernel);
  return row;
}

ScenarioResult RunScenario(const ScenarioSpec& spec) {
  spec.Validate();
  const MessageSpace space = spec.Space();
  RandomStream channel_rng(spec.opt.seed, {Label(StreamLabel::kChannel)});
  RandomStream snr_rng(spec.opt.seed, {Label(StreamLabel::kSnr)});
  std::vector<double> snr = ResolveSnr(spec.snr, spec.users, snr_rng);
  ChannelSet channels = ResolveChannels(spec, snr, channel_rng);
  const RandomStream eval_rng(spec.opt.seed, {Label(StreamLabel::kEval)});

  ScenarioResult result{spec, snr, channels, {}};
  for (const auto& encoder : spec.encoders) {
    if (encoder == kMaxMin) {
      EncoderRow row;
      row.encoder = encoder;
      RunResult run = OptimizeWithRestarts(channels, space, spec.pc, spec.opt);
      row.mi = run.per_user_mi;
      row.constellation = run.final_constellation;
      row.run = std::move(run);
      result.rows.push_back(std::move(row));
      continue;
    }
    try {
      result.rows.push_back(EvaluateBaseline(encoder, channels, space, spec.pc,
                                             spec.opt.n_eval, eval_rng, spec.opt.kernel));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRankDeficient) throw;
      EncoderRow row;
      row.encoder = encoder;
      row.available = false;
      row.unavailable_reason = std::string(ErrorName(e.code()));
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void SweepConfig::Validate() const {
  if (antennas < 1 || users < 1)
    throw Error(ErrorCode::kValidationError, "sweep: T and K must be positive");
  if (snr_grid.empty()) throw Error(ErrorCode::kValidationError, "sweep: SNR grid is empty");
  if (experiments < 1) throw Error(ErrorCode::kValidationError, "sweep: experiments must be >= 1");
  if (!(jitter_std >= 0.0)) throw Error(ErrorCode::kValidationError, "sweep: jitter_std < 0");
  if (threads < 1) throw Error(ErrorCode::kValidationError, "sweep: threads must be >= 1");
  for (const auto& e : encoders)
    if (!IsKnownEncoder(e))
      throw Error(ErrorCode::kValidationError, "sweep: unknown encoder '" + e + "'");
  pc.Validate();
  opt.Validate();
}

std::uint64_t CellSeed(std::uint64_t seed, int experiment, int snr_index) {
  return RandomStream(seed, {static_cast<std::uint64_t>(experiment),
                             static_cast<std::uint64_t>(snr_index)})
      .key();
}

std::vector<SweepAggregate> AggregateSweep(const std::vector<SweepCell>& cells,
                                           std::span<const double> snr_grid,
                                           const std::vector<std::string>& encoders) {
  std::vector<SweepAggregate> out;
  for (std::size_t i = 0; i < snr_grid.size(); ++i)
    for (const auto& enc : encoders) {
      SweepAggregate agg{snr_grid[i], enc, 0.0, 0.0, 0};
      for (const auto& c : cells) {
        if (c.snr_index != static_cast<int>(i) || c.encoder != enc || !c.available) continue;
        agg.mean_min_mi += c.MinMi();
        agg.mean_mean_mi += c.MeanMi();
        ++agg.experiments;
      }
      if (agg.experiments > 0) {
        agg.mean_min_mi /= agg.experiments;
        agg.mean_mean_mi /= agg.experiments;
      }
      out.push_back(agg);
    }
  return out;
}

SweepResult RunSweep(const SweepConfig& cfg) {
  cfg.Validate();
  const MessageSpace space = MessageSpace::Binary(cfg.users);
  const int grid = static_cast<int>(cfg.snr_grid.size());

  std::vector<std::vector<Eigen::MatrixXcd>> channels(cfg.experiments);
  for (int e = 0; e < cfg.experiments; ++e) {
    RandomStream rng(cfg.opt.seed, {Label(StreamLabel::kChannel), static_cast<std::uint64_t>(e)});
    for (int k = 0; k < cfg.users; ++k) channels[e].push_back(RandomChannel(cfg.antennas, 1, rng));
  }

  const int total = cfg.experiments * grid;
  std::vector<std::vector<SweepCell>> slots(total);
  auto run_cell = [&](int index) {
    const int e = index / grid;
    const int i = index % grid;
    const std::uint64_t seed = CellSeed(cfg.opt.seed, e, i);
    RandomStream snr_rng(seed, {Label(StreamLabel::kSnr)});
    const auto snr =
        ResolveSnr(JitteredSnr{cfg.snr_grid[i], cfg.jitter_std}, cfg.users, snr_rng);
    const ChannelSet chan =
        ChannelSet::FromMatrices(channels[e], NoiseVars(snr, cfg.pc.mean_power));
    const RandomStream eval_rng(seed, {Label(StreamLabel::kEval)});

    for (const auto& enc : cfg.encoders) {
      SweepCell cell;
      cell.experiment = e;
      cell.snr_index = i;
      cell.snr_db = cfg.snr_grid[i];
      cell.user_snr_db = snr;
      cell.encoder = enc;
      if (enc == kMaxMin) {
        OptimizationConfig opt = cfg.opt;
        opt.seed = seed;
        RunResult run = OptimizeWithRestarts(chan, space, cfg.pc, opt);
        cell.mi = run.per_user_mi;
        cell.restart_min_mi = run.restart_min_mi;
        cell.constellation = run.final_constellation;
      } else {
        try {
          EncoderRow row = EvaluateBaseline(enc, chan, space, cfg.pc, cfg.opt.n_eval, eval_rng,
                                            cfg.opt.kernel);
          cell.mi = std::move(row.mi);
          cell.constellation = std::move(row.constellation);
        } catch (const Error& err) {
          if (err.code() != ErrorCode::kRankDeficient) throw;
          cell.available = false;
        }
      }
      slots[index].push_back(std::move(cell));
    }
  };

  if (cfg.threads == 1) {
    for (int c = 0; c < total; ++c) run_cell(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(cfg.threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int c = next++; c < total; c = next++) run_cell(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  result.config = cfg;
  for (auto& s : slots)
    for (auto& c : s) result.cells.push_back(std::move(c));
  result.aggregates = AggregateSweep(result.cells, cfg.snr_grid, cfg.encoders);
  return result;
}

}  // namespace jcd
