#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "jcd/model.hpp"

namespace jcd {

// |llr0| is clamped here before it reaches the sigmoid or softplus.
inline constexpr double kLlrCap = 745.0;
inline constexpr double kPosteriorFloor = 1e-300;

// Per-user view of a constellation: the noiseless projections zeta_k^H X(w)
// and the symbol each joint message carries for user k.
class UserProjection {
 public:
  UserProjection(const Constellation& constellation, const ChannelSet& channels,
                 const MessageSpace& space, int user, const DistanceKernel& kernel);

  // d_k(x) for every point, ordered by joint-message index.
  Eigen::VectorXd Distances(const Eigen::RowVectorXcd& y) const;
  double Llr0(int symbol, const Eigen::RowVectorXcd& y) const;
  double Llr(int symbol, const Eigen::RowVectorXcd& y) const;
  double SampleLoss(int symbol, const Eigen::RowVectorXcd& y) const;

  int symbol(std::size_t joint) const { return symbols_[joint]; }
  int alphabet() const { return alphabet_; }
  double denominator() const { return denominator_; }
  const Eigen::MatrixXcd& projections() const { return proj_; }

 private:
  void CheckSymbol(int symbol) const;

  Eigen::MatrixXcd proj_;  // |W| x R
  std::vector<int> symbols_;
  int alphabet_;
  double denominator_;
};

Eigen::VectorXd Distances(const Constellation& constellation, const ChannelSet& channels,
                          int user, const Eigen::RowVectorXcd& y,
                          const DistanceKernel& kernel = {});

// ln( sum_{x in X_k(w)} e^{-d(x)} / sum_{x not in X_k(w)} e^{-d(x)} ), clamped to
// [-kLlrCap, kLlrCap].
double Llr0(const Constellation& constellation, const ChannelSet& channels,
            const MessageSpace& space, int user, int symbol, const Eigen::RowVectorXcd& y,
            const DistanceKernel& kernel = {});

// Log ratio of summed joint-message likelihoods agreeing/disagreeing with w_k.
double Llr(const Constellation& constellation, const ChannelSet& channels,
           const MessageSpace& space, int user, int symbol, const Eigen::RowVectorXcd& y,
           const DistanceKernel& kernel = {});

double Posterior(double llr0);

// -log2(sigmoid(llr0)) in the fused form log2(1 + e^{-llr0}).
double SampleLossFromLlr(double llr0);

double SampleLoss(const Constellation& constellation, const ChannelSet& channels,
                  const MessageSpace& space, int user, int true_symbol,
                  const Eigen::RowVectorXcd& y, const DistanceKernel& kernel = {});

// Mean sample loss over the batch, summed left to right.
double BatchLoss(const Constellation& constellation, const ChannelSet& channels,
                 const MessageSpace& space, const ObservationBatch& batch,
                 const DistanceKernel& kernel = {});

struct MiEstimate {
  double mi = 0.0;      // clamped to [0, log2 |W_k|]
  double std_error = 0.0;
  double raw_mi = 0.0;  // before clamping
  double loss = 0.0;    // batch cross-entropy, bits
};

// I(W_k; Y_k) = log2|W_k| - H(W_k | Y_k), the equivocation estimated on a
// freshly simulated batch of n_eval samples (n_eval >= 1000).
MiEstimate EstimateMi(const Constellation& constellation, const ChannelSet& channels,
                      const MessageSpace& space, int user, std::size_t n_eval,
                      RandomStream rng, const DistanceKernel& kernel = {});

// Evaluates every user, user k on rng.Substream(k).
std::vector<MiEstimate> EstimateMiAllUsers(const Constellation& constellation,
                                           const ChannelSet& channels,
                                           const MessageSpace& space, std::size_t n_eval,
                                           const RandomStream& rng,
                                           const DistanceKernel& kernel = {});

struct LossReport {
  std::vector<double> per_user_loss;
  double max_loss = 0.0;
  int argmax_user = 0;
  std::optional<std::vector<double>> per_user_mi;

  // max and argmax with lowest-index tie-break.
  static LossReport FromLosses(std::vector<double> losses);
};

LossReport MakeLossReport(const Constellation& constellation, const ChannelSet& channels,
                          const MessageSpace& space,
                          std::span<const ObservationBatch> batches,
                          const DistanceKernel& kernel = {});

}  // namespace jcd
