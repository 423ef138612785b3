#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jcd/metrics.hpp"
#include "jcd/model.hpp"
#include "jcd/optimizer.hpp"

namespace jcd {

// Un-normalized channel matrices H_k, each T x R.
struct ExplicitChannels {
  std::vector<Eigen::MatrixXcd> h;
};
// H_k entries drawn i.i.d. CN(0, 1), then normalized.
struct RandomChannels {};
using ChannelSource = std::variant<ExplicitChannels, RandomChannels>;

struct ExplicitSnr {
  std::vector<double> db;
};
// gamma_k ~ Normal(mean, jitter_std), drawn once per user.
struct JitteredSnr {
  double mean = 0.0;
  double jitter_std = 1.0;
};
using SnrSpec = std::variant<ExplicitSnr, JitteredSnr>;

inline constexpr const char* kMaxMin = "maxmin";

struct ScenarioSpec {
  std::string name;
  int antennas = 2;  // T
  int users = 2;     // K
  int rx = 1;        // R
  std::vector<int> alphabet;
  ChannelSource channels = RandomChannels{};
  SnrSpec snr = ExplicitSnr{};
  PowerConstraint pc;
  OptimizationConfig opt;
  // Subset of {"mmse", "zf", "matched", "maxmin"}, in output order.
  std::vector<std::string> encoders{"mmse", "zf", "matched", kMaxMin};

  void Validate() const;
  MessageSpace Space() const { return MessageSpace(alphabet); }
};

// "scenario1" / "scenario2": T=2, K=2, R=1, SNRs 6 and 8 dB, P_m=1, P_c=4,
// eta=0.1, N=10^4, 100 iterations, binary alphabets, real-valued points.
ScenarioSpec BuiltinScenario(const std::string& name);
std::vector<std::string> BuiltinScenarioNames();

// Per-user SNRs in dB; jittered specs draw from `rng`.
std::vector<double> ResolveSnr(const SnrSpec& snr, int users, RandomStream& rng);
ChannelSet ResolveChannels(const ScenarioSpec& spec, std::span<const double> snr_db,
                           RandomStream& rng);

struct EncoderRow {
  std::string encoder;
  bool available = true;
  std::string unavailable_reason;
  std::vector<MiEstimate> mi;
  std::optional<Constellation> constellation;
  std::optional<RunResult> run;  // MAX-MIN rows only

  double MinMi() const;
  double MeanMi() const;
};

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<double> snr_db;
  ChannelSet channels;
  std::vector<EncoderRow> rows;
};

// Builds/learns each requested constellation and evaluates all of them on one
// shared evaluation stream. Rank-deficient ZF yields an unavailable row.
ScenarioResult RunScenario(const ScenarioSpec& spec);

// Builds one MU-LP row; throws on numerical failure instead of marking it.
EncoderRow EvaluateBaseline(const std::string& encoder, const ChannelSet& channels,
                            const MessageSpace& space, const PowerConstraint& pc,
                            std::size_t n_eval, const RandomStream& eval_rng,
                            const DistanceKernel& kernel);

struct SweepConfig {
  int antennas = 4;
  int users = 10;
  std::vector<double> snr_grid;
  int experiments = 20;
  double jitter_std = 1.0;
  PowerConstraint pc;
  OptimizationConfig opt;  // opt.restarts is the per-cell restart count
  std::vector<std::string> encoders{"mmse", "zf", "matched", kMaxMin};
  int threads = 1;

  void Validate() const;
};

struct SweepCell {
  int experiment = 0;
  int snr_index = 0;
  double snr_db = 0.0;  // grid value s
  std::vector<double> user_snr_db;
  std::string encoder;
  bool available = true;
  std::vector<MiEstimate> mi;
  std::vector<double> restart_min_mi;
  std::optional<Constellation> constellation;

  double MinMi() const;
  double MeanMi() const;
};

struct SweepAggregate {
  double snr_db = 0.0;
  std::string encoder;
  double mean_min_mi = 0.0;
  double mean_mean_mi = 0.0;
  int experiments = 0;  // cells that were available
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  // experiment-major, then snr, then encoder
  std::vector<SweepAggregate> aggregates;
};

std::vector<SweepAggregate> AggregateSweep(const std::vector<SweepCell>& cells,
                                           std::span<const double> snr_grid,
                                           const std::vector<std::string>& encoders);

// Channels are drawn once per experiment and reused for every grid point;
// each (experiment, snr) cell owns its own random streams.
SweepResult RunSweep(const SweepConfig& cfg);

// Seed owned by one sweep cell.
std::uint64_t CellSeed(std::uint64_t seed, int experiment, int snr_index);

}  // namespace jcd
