#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "jcd/rng.hpp"

namespace jcd {

using Complex = std::complex<double>;

// Per-user alphabet sizes |W_1|..|W_K|. Joint messages are numbered in
// mixed radix with user 0 as the most significant digit.
class MessageSpace {
 public:
  explicit MessageSpace(std::vector<int> sizes);

  // K binary users.
  static MessageSpace Binary(int users);

  int users() const { return static_cast<int>(sizes_.size()); }
  int size(int user) const { return sizes_[user]; }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t total() const { return total_; }

  int Symbol(std::size_t joint, int user) const {
    return static_cast<int>((joint / stride_[user]) % sizes_[user]);
  }
  std::vector<int> Digits(std::size_t joint) const;
  std::size_t Index(std::span<const int> digits) const;
  // Concatenated per-user symbols, user 0 first ("01" for K=2).
  std::string Label(std::size_t joint) const;

  bool operator==(const MessageSpace&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> stride_;
  std::size_t total_ = 1;
};

std::vector<std::vector<int>> EnumerateJointMessages(const MessageSpace& space);

// One transmit vector per joint message: row j is X(j), columns are antennas.
class Constellation {
 public:
  Constellation() = default;
  explicit Constellation(Eigen::MatrixXcd points);

  const Eigen::MatrixXcd& points() const { return points_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  int antennas() const { return static_cast<int>(points_.cols()); }

  // Mean over points of the squared norm.
  double MeanPower() const;
  // Largest |x_t|^2 over all points and antennas.
  double MaxAntennaPower() const;
  double MaxImagMagnitude() const;

 private:
  Eigen::MatrixXcd points_;
};

// Normalized per-user channels. zeta[k] is T x R with unit Frobenius norm.
class ChannelSet {
 public:
  ChannelSet(std::vector<Eigen::MatrixXcd> zeta, std::vector<double> gain,
             std::vector<double> noise_var);

  // Splits each H_k into gain and normalized channel.
  static ChannelSet FromMatrices(const std::vector<Eigen::MatrixXcd>& h,
                                 std::vector<double> noise_var);

  int users() const { return static_cast<int>(zeta_.size()); }
  int antennas() const { return static_cast<int>(zeta_.front().rows()); }
  int rx() const { return static_cast<int>(zeta_.front().cols()); }

  const Eigen::MatrixXcd& zeta(int user) const { return zeta_[user]; }
  double gain(int user) const { return gain_[user]; }
  double noise_var(int user) const { return noise_var_[user]; }
  const std::vector<double>& noise_vars() const { return noise_var_; }

  // [zeta_1 ... zeta_K], T x (K*R).
  Eigen::MatrixXcd Concatenated() const;
  ChannelSet WithNoiseVars(std::vector<double> noise_var) const;

 private:
  std::vector<Eigen::MatrixXcd> zeta_;
  std::vector<double> gain_;
  std::vector<double> noise_var_;
};

struct PowerConstraint {
  double mean_power = 1.0;
  double peak_antenna_power = 4.0;

  void Validate() const;
  bool operator==(const PowerConstraint&) const = default;
};

// How the noise variance sigma_k^2 is read.
//  kPaper:    each real dimension has variance sigma^2, distance |r|^2/(2 sigma^2).
//  kCircular: total complex variance sigma^2,         distance |r|^2/sigma^2.
// Either pairing makes the distance the exact Gaussian log-likelihood.
enum class NoiseConvention { kPaper, kCircular };

std::string_view ConventionName(NoiseConvention c);
NoiseConvention ParseConvention(std::string_view name);

struct DistanceKernel {
  NoiseConvention convention = NoiseConvention::kPaper;

  double Denominator(double noise_var) const {
    return convention == NoiseConvention::kPaper ? 2.0 * noise_var : noise_var;
  }
  // E|nu_r|^2 of one complex noise component.
  double ComplexVariance(double noise_var) const {
    return convention == NoiseConvention::kPaper ? 2.0 * noise_var : noise_var;
  }
};

struct ObservationBatch {
  std::vector<std::size_t> messages;
  Eigen::MatrixXcd y;  // N x R
  int user = 0;

  std::size_t samples() const { return messages.size(); }
};

std::pair<double, Eigen::MatrixXcd> NormalizeChannel(const Eigen::MatrixXcd& h);

double NoiseVarFromSnr(double snr_db, double mean_power);

std::vector<std::size_t> DrawMessages(const MessageSpace& space, std::size_t n,
                                      RandomStream& rng);

// N x R complex noise for the given convention.
Eigen::MatrixXcd DrawNoise(std::size_t n, int rx, double noise_var,
                           const DistanceKernel& kernel, RandomStream& rng);

// y^n = zeta_k^H X(w^n) + noise^n.
ObservationBatch Observe(const Constellation& constellation,
                         const ChannelSet& channels, int user,
                         std::span<const std::size_t> messages,
                         const Eigen::MatrixXcd& noise);

ObservationBatch SimulateObservations(const Constellation& constellation,
                                      const ChannelSet& channels, int user,
                                      std::span<const std::size_t> messages,
                                      const DistanceKernel& kernel,
                                      RandomStream& rng);

}  // namespace jcd
