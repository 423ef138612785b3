#include "jcd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jcd/error.hpp"

namespace jcd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

UserProjection::UserProjection(const Constellation& constellation,
                               const ChannelSet& channels, const MessageSpace& space,
                               int user, const DistanceKernel& kernel)
    : proj_(constellation.points() * channels.zeta(user).conjugate()),
      symbols_(space.total()),
      alphabet_(space.size(user)),
      denominator_(kernel.Denominator(channels.noise_var(user))) {
  if (constellation.size() != space.total())
    throw Error(ErrorCode::kValidationError,
                "constellation has " + std::to_string(constellation.size()) +
                    " points but the message space has " + std::to_string(space.total()));
  if (constellation.antennas() != channels.antennas())
    throw Error(ErrorCode::kValidationError, "constellation and channel antenna counts differ");
  for (std::size_t j = 0; j < space.total(); ++j) symbols_[j] = space.Symbol(j, user);
}

void UserProjection::CheckSymbol(int symbol) const {
  if (symbol < 0 || symbol >= alphabet_)
    throw Error(ErrorCode::kEmptyHypothesisSet,
                "symbol " + std::to_string(symbol) + " selects no constellation points");
}

Eigen::VectorXd UserProjection::Distances(const Eigen::RowVectorXcd& y) const {
  Eigen::VectorXd d(proj_.rows());
  for (Eigen::Index j = 0; j < proj_.rows(); ++j)
    d(j) = (y - proj_.row(j)).squaredNorm() / denominator_;
  return d;
}

double UserProjection::Llr0(int symbol, const Eigen::RowVectorXcd& y) const {
  CheckSymbol(symbol);
  const Eigen::VectorXd d = Distances(y);
  double top_in = kNegInf, top_out = kNegInf;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (symbols_[j] == symbol)
      top_in = std::max(top_in, -d(j));
    else
      top_out = std::max(top_out, -d(j));
  }
  double sum_in = 0.0, sum_out = 0.0;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (symbols_[j] == symbol)
      sum_in += std::exp(-d(j) - top_in);
    else
      sum_out += std::exp(-d(j) - top_out);
  }
  const double llr = (top_in + std::log(sum_in)) - (top_out + std::log(sum_out));
  if (std::isnan(llr)) return 0.0;
  return std::clamp(llr, -kLlrCap, kLlrCap);
}

double UserProjection::Llr(int symbol, const Eigen::RowVectorXcd& y) const {
  CheckSymbol(symbol);
  // Complex Gaussian log-density per joint message; the normalizer cancels
  // in the ratio but is kept so each term is a true log-likelihood.
  const double log_norm = -static_cast<double>(proj_.cols()) *
                          std::log(std::numbers::pi * denominator_);
  Eigen::VectorXd loglik(proj_.rows());
  for (Eigen::Index j = 0; j < proj_.rows(); ++j)
    loglik(j) = log_norm - (y - proj_.row(j)).squaredNorm() / denominator_;
  const double top = loglik.maxCoeff();
  double agree = 0.0, disagree = 0.0;
  for (Eigen::Index j = 0; j < loglik.size(); ++j)
    (symbols_[j] == symbol ? agree : disagree) += std::exp(loglik(j) - top);
  double llr;
  if (agree > 0.0 && disagree > 0.0) {
    llr = std::log(agree) - std::log(disagree);
  } else {
    // One side underflowed entirely; the ratio is dominated by the best terms.
    double top_in = kNegInf, top_out = kNegInf;
    for (Eigen::Index j = 0; j < loglik.size(); ++j) {
      if (symbols_[j] == symbol)
        top_in = std::max(top_in, loglik(j));
      else
        top_out = std::max(top_out, loglik(j));
    }
    llr = top_in - top_out;
  }
  return std::clamp(llr, -kLlrCap, kLlrCap);
}

double UserProjection::SampleLoss(int symbol, const Eigen::RowVectorXcd& y) const {
  return SampleLossFromLlr(Llr0(symbol, y));
}

Eigen::VectorXd Distances(const Constellation& constellation, const ChannelSet& channels,
                          int user, const Eigen::RowVectorXcd& y,
                          const DistanceKernel& kernel) {
  const Eigen::MatrixXcd proj = constellation.points() * channels.zeta(user).conjugate();
  const double denom = kernel.Denominator(channels.noise_var(user));
  Eigen::VectorXd d(proj.rows());
  for (Eigen::Index j = 0; j < proj.rows(); ++j) d(j) = (y - proj.row(j)).squaredNorm() / denom;
  return d;
}

double Llr0(const Constellation& constellation, const ChannelSet& channels,
            const MessageSpace& space, int user, int symbol, const Eigen::RowVectorXcd& y,
            const DistanceKernel& kernel) {
  return UserProjection(constellation, channels, space, user, kernel).Llr0(symbol, y);
}

double Llr(const Constellation& constellation, const ChannelSet& channels,
           const MessageSpace& space, int user, int symbol, const Eigen::RowVectorXcd& y,
           const DistanceKernel& kernel) {
  return UserProjection(constellation, channels, space, user, kernel).Llr(symbol, y);
}

double Posterior(double llr0) {
  const double p = 1.0 / (1.0 + std::exp(-llr0));
  return std::clamp(p, kPosteriorFloor, 1.0);
}

double SampleLossFromLlr(double llr0) {
  return Softplus(-std::clamp(llr0, -kLlrCap, kLlrCap)) / std::numbers::ln2;
}

double SampleLoss(const Constellation& constellation, const ChannelSet& channels,
                  const MessageSpace& space, int user, int true_symbol,
                  const Eigen::RowVectorXcd& y, const DistanceKernel& kernel) {
  return UserProjection(constellation, channels, space, user, kernel)
      .SampleLoss(true_symbol, y);
}

double BatchLoss(const Constellation& constellation, const ChannelSet& channels,
                 const MessageSpace& space, const ObservationBatch& batch,
                 const DistanceKernel& kernel) {
  if (batch.samples() == 0)
    throw Error(ErrorCode::kValidationError, "batch must hold at least one sample");
  const UserProjection view(constellation, channels, space, batch.user, kernel);
  double sum = 0.0;
  for (std::size_t n = 0; n < batch.samples(); ++n)
    sum += view.SampleLoss(view.symbol(batch.messages[n]),
                           batch.y.row(static_cast<Eigen::Index>(n)));
  return sum / static_cast<double>(batch.samples());
}

MiEstimate EstimateMi(const Constellation& constellation, const ChannelSet& channels,
                      const MessageSpace& space, int user, std::size_t n_eval,
                      RandomStream rng, const DistanceKernel& kernel) {
  if (n_eval < 1000)
    throw Error(ErrorCode::kValidationError, "n_eval must be at least 1000");
  const auto messages = DrawMessages(space, n_eval, rng);
  const ObservationBatch batch =
      SimulateObservations(constellation, channels, user, messages, kernel, rng);
  const UserProjection view(constellation, channels, space, user, kernel);

  std::vector<double> losses(n_eval);
  double sum = 0.0;
  for (std::size_t n = 0; n < n_eval; ++n) {
    losses[n] = view.SampleLoss(view.symbol(messages[n]),
                                batch.y.row(static_cast<Eigen::Index>(n)));
    sum += losses[n];
  }
  const double mean = sum / static_cast<double>(n_eval);
  double ss = 0.0;
  for (double l : losses) ss += (l - mean) * (l - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n_eval - 1));

  const double entropy = std::log2(static_cast<double>(space.size(user)));
  MiEstimate est;
  est.loss = mean;
  est.raw_mi = entropy - mean;
  est.mi = std::clamp(est.raw_mi, 0.0, entropy);
  est.std_error = sd / std::sqrt(static_cast<double>(n_eval));
  return est;
}

std::vector<MiEstimate> EstimateMiAllUsers(const Constellation& constellation,
                                           const ChannelSet& channels,
                                           const MessageSpace& space, std::size_t n_eval,
                                           const RandomStream& rng,
                                           const DistanceKernel& kernel) {
  std::vector<MiEstimate> out;
  for (int k = 0; k < space.users(); ++k)
    out.push_back(EstimateMi(constellation, channels, space, k, n_eval,
                             rng.Substream(static_cast<std::uint64_t>(k)), kernel));
  return out;
}

LossReport LossReport::FromLosses(std::vector<double> losses) {
  LossReport r;
  r.per_user_loss = std::move(losses);
  for (std::size_t k = 0; k < r.per_user_loss.size(); ++k) {
    if (k == 0 || r.per_user_loss[k] > r.max_loss) {
      r.max_loss = r.per_user_loss[k];
      r.argmax_user = static_cast<int>(k);
    }
  }
  return r;
}

LossReport MakeLossReport(const Constellation& constellation, const ChannelSet& channels,
                          const MessageSpace& space,
                          std::span<const ObservationBatch> batches,
                          const DistanceKernel& kernel) {
  if (static_cast<int>(batches.size()) != space.users())
    throw Error(ErrorCode::kValidationError, "need one batch per user");
  std::vector<double> losses;
  for (const auto& b : batches) losses.push_back(BatchLoss(constellation, channels, space, b, kernel));
  return LossReport::FromLosses(std::move(losses));
}

}  // namespace jcd
