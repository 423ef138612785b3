#include "jcd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "jcd/error.hpp"

namespace jcd {

Eigen::VectorXd ToReal(const Constellation& constellation) {
  const auto& x = constellation.points();
  Eigen::VectorXd out(2 * x.size());
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      out(i++) = x(j, t).real();
      out(i++) = x(j, t).imag();
    }
  return out;
}

Constellation FromReal(const Eigen::VectorXd& params, int antennas) {
  const Eigen::Index points = params.size() / (2 * antennas);
  Eigen::MatrixXcd x(points, antennas);
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < points; ++j)
    for (int t = 0; t < antennas; ++t, i += 2) x(j, t) = {params(i), params(i + 1)};
  return Constellation(std::move(x));
}

AdamState AdamState::Zero(Eigen::Index parameters, double eta) {
  AdamState s;
  s.first_moment = Eigen::VectorXd::Zero(parameters);
  s.second_moment = Eigen::VectorXd::Zero(parameters);
  s.eta = eta;
  return s;
}

void OptimizationConfig::Validate() const {
  if (!(eta > 0.0)) throw Error(ErrorCode::kValidationError, "eta must be positive");
  if (n_samples < 1) throw Error(ErrorCode::kValidationError, "n_samples must be >= 1");
  if (max_iterations < 1)
    throw Error(ErrorCode::kValidationError, "iterations must be >= 1");
  if (restarts < 1) throw Error(ErrorCode::kValidationError, "restarts must be >= 1");
  if (n_eval < 1000) throw Error(ErrorCode::kValidationError, "n_eval must be >= 1000");
  if (plateau && (plateau->window < 1 || plateau->min_improvement < 0.0))
    throw Error(ErrorCode::kValidationError, "invalid plateau rule");
}

double RunResult::MinMi() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : per_user_mi) m = std::min(m, e.mi);
  return m;
}

double RunResult::MeanMi() const {
  double s = 0.0;
  for (const auto& e : per_user_mi) s += e.mi;
  return s / static_cast<double>(per_user_mi.size());
}

TrainingDraw DrawTraining(const MessageSpace& space, const ChannelSet& channels,
                          std::size_t n, const DistanceKernel& kernel, RandomStream& rng) {
  TrainingDraw draw;
  draw.messages = DrawMessages(space, n, rng);
  for (int k = 0; k < channels.users(); ++k)
    draw.noise.push_back(DrawNoise(n, channels.rx(), channels.noise_var(k), kernel, rng));
  return draw;
}

UserGradient UserLossAndGradient(const Constellation& constellation,
                                 const ChannelSet& channels, const MessageSpace& space,
                                 int user, std::span<const std::size_t> messages,
                                 const Eigen::MatrixXcd& noise, const DistanceKernel& kernel) {
  const UserProjection view(constellation, channels, space, user, kernel);
  const Eigen::MatrixXcd& proj = view.projections();
  const Eigen::Index points = proj.rows();
  const double c = view.denominator();

  Eigen::MatrixXcd grad_proj = Eigen::MatrixXcd::Zero(points, proj.cols());
  Eigen::MatrixXcd residual(points, proj.cols());
  Eigen::VectorXd neg_d(points);
  Eigen::VectorXd weight(points);
  double loss_sum = 0.0;

  for (std::size_t n = 0; n < messages.size(); ++n) {
    const auto sent = static_cast<Eigen::Index>(messages[n]);
    const int symbol = view.symbol(messages[n]);
    const Eigen::RowVectorXcd y = proj.row(sent) + noise.row(static_cast<Eigen::Index>(n));

    double top_in = -std::numeric_limits<double>::infinity();
    double top_out = top_in;
    for (Eigen::Index j = 0; j < points; ++j) {
      residual.row(j) = y - proj.row(j);
      neg_d(j) = -residual.row(j).squaredNorm() / c;
      if (view.symbol(j) == symbol)
        top_in = std::max(top_in, neg_d(j));
      else
        top_out = std::max(top_out, neg_d(j));
    }
    double sum_in = 0.0, sum_out = 0.0;
    for (Eigen::Index j = 0; j < points; ++j) {
      weight(j) = std::exp(neg_d(j) - (view.symbol(j) == symbol ? top_in : top_out));
      (view.symbol(j) == symbol ? sum_in : sum_out) += weight(j);
    }
    const double raw = (top_in + std::log(sum_in)) - (top_out + std::log(sum_out));
    const double llr = std::clamp(raw, -kLlrCap, kLlrCap);
    loss_sum += SampleLossFromLlr(llr);
    if (raw != llr) continue;  // clamped: locally flat

    // dLoss/dllr = -(1 - sigmoid(llr)) / ln 2; dllr/dd_j = -a_j in-set, +b_j out.
    const double dloss_dllr = -1.0 / (1.0 + std::exp(llr)) / std::numbers::ln2;
    Eigen::RowVectorXcd grad_y = Eigen::RowVectorXcd::Zero(proj.cols());
    for (Eigen::Index j = 0; j < points; ++j) {
      const bool in = view.symbol(j) == symbol;
      const double share = weight(j) / (in ? sum_in : sum_out);
      const double dloss_dd = dloss_dllr * (in ? -share : share);
      // d(|e|^2 / c) = 2 e / c in the (Re, Im) gradient convention.
      const Eigen::RowVectorXcd g = (2.0 * dloss_dd / c) * residual.row(j);
      grad_y += g;
      grad_proj.row(j) -= g;
    }
    grad_proj.row(sent) += grad_y;
  }

  const double inv_n = 1.0 / static_cast<double>(messages.size());
  UserGradient out;
  out.loss = loss_sum * inv_n;
  // proj = X conj(zeta)  =>  grad_X = grad_proj zeta^T.
  out.gradient = inv_n * grad_proj * channels.zeta(user).transpose();
  return out;
}

LossGradient LossAndGradient(const Constellation& constellation, const ChannelSet& channels,
                             const MessageSpace& space, const TrainingDraw& draw,
                             const DistanceKernel& kernel) {
  std::vector<double> losses;
  std::vector<Eigen::MatrixXcd> grads;
  for (int k = 0; k < space.users(); ++k) {
    auto ug = UserLossAndGradient(constellation, channels, space, k, draw.messages,
                                  draw.noise[k], kernel);
    losses.push_back(ug.loss);
    grads.push_back(std::move(ug.gradient));
  }
  LossGradient out;
  out.report = LossReport::FromLosses(std::move(losses));
  out.gradient = ToReal(Constellation(grads[out.report.argmax_user]));
  return out;
}

Constellation ProjectConstraints(const Constellation& constellation, const PowerConstraint& pc) {
  const Eigen::MatrixXcd& x = constellation.points();
  const Eigen::ArrayXXd mag2 = x.cwiseAbs2().array();
  const double total = mag2.sum();
  if (!(total > 0.0))
    throw Error(ErrorCode::kZeroConstellation, "cannot project an all-zero constellation");

  const double points = static_cast<double>(x.rows());
  const double target = points * pc.mean_power;
  if (std::abs(total / target - 1.0) <= 1e-14 &&
      mag2.maxCoeff() <= pc.peak_antenna_power * (1.0 + 1e-12))
    return constellation;

  // Find c with sum min(c^2 |x|^2, P_c) = |W| P_m. Clipping the k largest
  // components leaves c^2 = (target - k P_c) / (sum of the rest).
  std::vector<double> sorted(mag2.data(), mag2.data() + mag2.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double scale2 = std::numeric_limits<double>::infinity();
  double rest = total;
  for (std::size_t k = 0; k < sorted.size() && sorted[k] > 0.0; ++k) {
    const double c2 = (target - static_cast<double>(k) * pc.peak_antenna_power) / rest;
    if (c2 <= 0.0) break;
    const bool clipped_ok =
        k == 0 || c2 * sorted[k - 1] >= pc.peak_antenna_power * (1.0 - 1e-12);
    if (clipped_ok && c2 * sorted[k] <= pc.peak_antenna_power * (1.0 + 1e-12)) {
      scale2 = c2;
      break;
    }
    rest -= sorted[k];
  }

  Eigen::MatrixXcd out(x.rows(), x.cols());
  const double radius = std::sqrt(pc.peak_antenna_power);
  const double scale = std::sqrt(scale2);
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      const Complex v = x(j, t);
      if (v == Complex{}) {
        out(j, t) = v;
      } else if (scale2 * mag2(j, t) > pc.peak_antenna_power) {
        out(j, t) = v * (radius / std::abs(v));
      } else {
        out(j, t) = v * scale;
      }
    }
  return Constellation(std::move(out));
}

Constellation RandomInit(const MessageSpace& space, int antennas, const PowerConstraint& pc,
                         RandomStream& rng, bool real_valued) {
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(space.total()), antennas);
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    for (int t = 0; t < antennas; ++t)
      x(j, t) = real_valued ? Complex{rng.Normal(), 0.0} : rng.ComplexNormal(1.0);
  return ProjectConstraints(Constellation(std::move(x)), pc);
}

std::pair<AdamState, Constellation> AdamStep(AdamState state,
                                             const Constellation& constellation,
                                             const Eigen::VectorXd& gradient) {
  Eigen::VectorXd theta = ToReal(constellation);
  if (gradient.size() != theta.size())
    throw Error(ErrorCode::kValidationError, "gradient size does not match the constellation");
  if (state.first_moment.size() != theta.size())
    throw Error(ErrorCode::kValidationError, "Adam state size does not match the constellation");

  state.step_count += 1;
  const auto t = static_cast<double>(state.step_count);
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * gradient;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * gradient.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  const Eigen::ArrayXd m_hat = state.first_moment.array() / c1;
  const Eigen::ArrayXd v_hat = state.second_moment.array() / c2;
  theta.array() -= state.eta * m_hat / (v_hat.sqrt() + state.eps);
  return {std::move(state), FromReal(theta, constellation.antennas())};
}

RunResult Optimize(const ChannelSet& channels, const MessageSpace& space,
                   const PowerConstraint& pc, const OptimizationConfig& cfg, int restart,
                   const IterationObserver& observer) {
  cfg.Validate();
  pc.Validate();
  if (channels.users() != space.users())
    throw Error(ErrorCode::kValidationError, "channel and message space user counts differ");

  const auto r = static_cast<std::uint64_t>(restart);
  RandomStream init_rng(cfg.seed, {Label(StreamLabel::kInit), r});
  RandomStream train_rng(cfg.seed, {Label(StreamLabel::kTrain), r});
  const RandomStream eval_rng(cfg.seed, {Label(StreamLabel::kEval)});

  RunResult result;
  result.config = cfg;
  result.seed = cfg.seed;
  result.restart = restart;
  result.initial_constellation =
      RandomInit(space, channels.antennas(), pc, init_rng, cfg.real_constellation);

  Constellation x = result.initial_constellation;
  AdamState adam = AdamState::Zero(2 * static_cast<Eigen::Index>(x.points().size()), cfg.eta);
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const TrainingDraw draw = DrawTraining(space, channels, cfg.n_samples, cfg.kernel, train_rng);
    LossGradient lg = LossAndGradient(x, channels, space, draw, cfg.kernel);
    result.loss_history.push_back({it, lg.report.max_loss, lg.report.argmax_user});

    if (cfg.real_constellation)
      for (Eigen::Index i = 1; i < lg.gradient.size(); i += 2) lg.gradient(i) = 0.0;
    auto [next_state, stepped] = AdamStep(std::move(adam), x, lg.gradient);
    adam = std::move(next_state);
    x = ProjectConstraints(stepped, pc);
    if (observer) observer(it, x, lg.report);

    if (cfg.plateau) {
      if (lg.report.max_loss < best - cfg.plateau->min_improvement) {
        best = lg.report.max_loss;
        since_best = 0;
      } else if (++since_best >= cfg.plateau->window) {
        break;
      }
    }
  }

  result.final_constellation = x;
  result.per_user_mi =
      EstimateMiAllUsers(x, channels, space, cfg.n_eval, eval_rng, cfg.kernel);
  return result;
}

RunResult OptimizeWithRestarts(const ChannelSet& channels, const MessageSpace& space,
                               const PowerConstraint& pc, const OptimizationConfig& cfg,
                               const IterationObserver& observer) {
  cfg.Validate();
  std::vector<double> table;
  std::optional<RunResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    RunResult run = Optimize(channels, space, pc, cfg, r, observer);
    table.push_back(run.MinMi());
    if (!best || run.MinMi() > best->MinMi()) best = std::move(run);
  }
  best->restart_min_mi = std::move(table);
  return std::move(*best);
}

}  // namespace jcd
