#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jcd/metrics.hpp"
#include "jcd/model.hpp"

namespace jcd {

// Points are optimized as 2*T*|W| reals laid out point-major:
// [Re X(0)_0, Im X(0)_0, Re X(0)_1, ..., Im X(|W|-1)_{T-1}].
Eigen::VectorXd ToReal(const Constellation& constellation);
Constellation FromReal(const Eigen::VectorXd& params, int antennas);

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step_count = 0;
  double eta = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState Zero(Eigen::Index parameters, double eta);
};

// Stop once the best max-loss has not improved by `min_improvement` bits for
// `window` iterations.
struct PlateauRule {
  int window = 20;
  double min_improvement = 1e-4;
  bool operator==(const PlateauRule&) const = default;
};

struct OptimizationConfig {
  double eta = 0.1;
  std::size_t n_samples = 10000;
  int max_iterations = 100;
  std::optional<PlateauRule> plateau;
  int restarts = 1;
  std::uint64_t seed = 0;
  std::size_t n_eval = 100000;
  // Optimize real parts only; imaginary parts stay zero.
  bool real_constellation = false;
  DistanceKernel kernel;

  void Validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double max_loss = 0.0;
  int argmax_user = 0;
};

struct RunResult {
  Constellation initial_constellation;
  Constellation final_constellation;
  std::vector<IterationRecord> loss_history;
  std::vector<MiEstimate> per_user_mi;
  OptimizationConfig config;
  std::uint64_t seed = 0;
  int restart = 0;
  // min_k MI of every restart, in restart order (filled by the restart driver).
  std::vector<double> restart_min_mi;

  double MinMi() const;
  double MeanMi() const;
};

// Messages for one iteration (shared by all users) and each user's noise.
struct TrainingDraw {
  std::vector<std::size_t> messages;
  std::vector<Eigen::MatrixXcd> noise;  // per user, N x R
};

TrainingDraw DrawTraining(const MessageSpace& space, const ChannelSet& channels,
                          std::size_t n, const DistanceKernel& kernel, RandomStream& rng);

struct UserGradient {
  double loss = 0.0;
  Eigen::MatrixXcd gradient;  // |W| x T, dLoss/dRe + i dLoss/dIm
};

// Batch loss of one user and its gradient with the noise held fixed, so the
// observation moves with the transmitted point.
UserGradient UserLossAndGradient(const Constellation& constellation,
                                 const ChannelSet& channels, const MessageSpace& space,
                                 int user, std::span<const std::size_t> messages,
                                 const Eigen::MatrixXcd& noise,
                                 const DistanceKernel& kernel = {});

struct LossGradient {
  LossReport report;
  Eigen::VectorXd gradient;  // real layout, see ToReal
};

// Gradient of max_k L_k: the argmax user's gradient (lowest index on ties).
LossGradient LossAndGradient(const Constellation& constellation, const ChannelSet& channels,
                             const MessageSpace& space, const TrainingDraw& draw,
                             const DistanceKernel& kernel = {});

// Scale uniformly so the mean power is P_m, then pull every antenna component
// with |x_t|^2 > P_c back to the disc of radius sqrt(P_c), keeping its phase.
// The scale accounts for the clipped components, so the mean power stays P_m
// whenever that is reachable.
Constellation ProjectConstraints(const Constellation& constellation, const PowerConstraint& pc);

Constellation RandomInit(const MessageSpace& space, int antennas, const PowerConstraint& pc,
                         RandomStream& rng, bool real_valued = false);

// One bias-corrected Adam step on the real parameterization; not projected.
std::pair<AdamState, Constellation> AdamStep(AdamState state,
                                             const Constellation& constellation,
                                             const Eigen::VectorXd& gradient);

using IterationObserver =
    std::function<void(int iteration, const Constellation&, const LossReport&)>;

RunResult Optimize(const ChannelSet& channels, const MessageSpace& space,
                   const PowerConstraint& pc, const OptimizationConfig& cfg,
                   int restart = 0, const IterationObserver& observer = {});

// Best of cfg.restarts independent runs by min_k MI on the shared evaluation stream.
RunResult OptimizeWithRestarts(const ChannelSet& channels, const MessageSpace& space,
                               const PowerConstraint& pc, const OptimizationConfig& cfg,
                               const IterationObserver& observer = {});

}  // namespace jcd
