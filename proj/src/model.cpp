#include "jcd/model.hpp"

#include <cmath>
#include <string>

#include "jcd/error.hpp"

namespace jcd {

MessageSpace::MessageSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty())
    throw Error(ErrorCode::kValidationError, "message space needs at least one user");
  stride_.assign(sizes_.size(), 1);
  for (int k = users() - 1; k >= 0; --k) {
    if (sizes_[k] < 2)
      throw Error(ErrorCode::kValidationError,
                  "alphabet size of user " + std::to_string(k) + " must be >= 2");
    stride_[k] = total_;
    total_ *= static_cast<std::size_t>(sizes_[k]);
  }
}

MessageSpace MessageSpace::Binary(int users) {
  return MessageSpace(std::vector<int>(static_cast<std::size_t>(users), 2));
}

std::vector<int> MessageSpace::Digits(std::size_t joint) const {
  std::vector<int> d(sizes_.size());
  for (int k = 0; k < users(); ++k) d[k] = Symbol(joint, k);
  return d;
}

std::size_t MessageSpace::Index(std::span<const int> digits) const {
  std::size_t idx = 0;
  for (int k = 0; k < users(); ++k) idx += stride_[k] * static_cast<std::size_t>(digits[k]);
  return idx;
}

std::string MessageSpace::Label(std::size_t joint) const {
  std::string s;
  for (int k = 0; k < users(); ++k) s += std::to_string(Symbol(joint, k));
  return s;
}

std::vector<std::vector<int>> EnumerateJointMessages(const MessageSpace& space) {
  std::vector<std::vector<int>> out;
  out.reserve(space.total());
  for (std::size_t j = 0; j < space.total(); ++j) out.push_back(space.Digits(j));
  return out;
}

Constellation::Constellation(Eigen::MatrixXcd points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0)
    throw Error(ErrorCode::kValidationError, "constellation is empty");
  if (!points_.allFinite())
    throw Error(ErrorCode::kValidationError, "constellation has non-finite entries");
}

double Constellation::MeanPower() const {
  return points_.squaredNorm() / static_cast<double>(points_.rows());
}

double Constellation::MaxAntennaPower() const {
  return points_.cwiseAbs2().maxCoeff();
}

double Constellation::MaxImagMagnitude() const {
  return points_.imag().cwiseAbs().maxCoeff();
}

ChannelSet::ChannelSet(std::vector<Eigen::MatrixXcd> zeta, std::vector<double> gain,
                       std::vector<double> noise_var)
    : zeta_(std::move(zeta)), gain_(std::move(gain)), noise_var_(std::move(noise_var)) {
  if (zeta_.empty())
    throw Error(ErrorCode::kValidationError, "channel set needs at least one user");
  if (gain_.size() != zeta_.size() || noise_var_.size() != zeta_.size())
    throw Error(ErrorCode::kValidationError, "channel set sizes disagree");
  for (std::size_t k = 0; k < zeta_.size(); ++k) {
    if (zeta_[k].rows() != zeta_[0].rows() || zeta_[k].cols() != zeta_[0].cols())
      throw Error(ErrorCode::kValidationError,
                  "channel " + std::to_string(k) + " has inconsistent shape");
    if (std::abs(zeta_[k].squaredNorm() - 1.0) > 1e-12)
      throw Error(ErrorCode::kValidationError,
                  "channel " + std::to_string(k) + " is not unit-norm");
    if (!(noise_var_[k] > 0.0) || !std::isfinite(noise_var_[k]))
      throw Error(ErrorCode::kValidationError,
                  "noise variance of user " + std::to_string(k) + " must be positive");
    if (!(gain_[k] >= 0.0))
      throw Error(ErrorCode::kValidationError, "channel gain must be nonnegative");
  }
}

ChannelSet ChannelSet::FromMatrices(const std::vector<Eigen::MatrixXcd>& h,
                                    std::vector<double> noise_var) {
  std::vector<Eigen::MatrixXcd> zeta;
  std::vector<double> gain;
  for (const auto& hk : h) {
    auto [g, z] = NormalizeChannel(hk);
    gain.push_back(g);
    zeta.push_back(std::move(z));
  }
  return ChannelSet(std::move(zeta), std::move(gain), std::move(noise_var));
}

Eigen::MatrixXcd ChannelSet::Concatenated() const {
  Eigen::MatrixXcd out(antennas(), users() * rx());
  for (int k = 0; k < users(); ++k) out.middleCols(k * rx(), rx()) = zeta_[k];
  return out;
}

ChannelSet ChannelSet::WithNoiseVars(std::vector<double> noise_var) const {
  return ChannelSet(zeta_, gain_, std::move(noise_var));
}

void PowerConstraint::Validate() const {
  if (!(mean_power > 0.0) || !std::isfinite(mean_power))
    throw Error(ErrorCode::kValidationError, "P_m must be positive");
  if (!(peak_antenna_power > 0.0) || !std::isfinite(peak_antenna_power))
    throw Error(ErrorCode::kValidationError, "P_c must be positive");
  if (peak_antenna_power < mean_power)
    throw Error(ErrorCode::kValidationError, "P_c must be >= P_m");
}

std::string_view ConventionName(NoiseConvention c) {
  return c == NoiseConvention::kPaper ? "paper" : "circular";
}

NoiseConvention ParseConvention(std::string_view name) {
  if (name == "paper") return NoiseConvention::kPaper;
  if (name == "circular") return NoiseConvention::kCircular;
  throw Error(ErrorCode::kValidationError,
              "convention must be 'paper' or 'circular', got '" + std::string(name) + "'");
}

std::pair<double, Eigen::MatrixXcd> NormalizeChannel(const Eigen::MatrixXcd& h) {
  const double g = h.squaredNorm();
  if (!(g > 0.0)) throw Error(ErrorCode::kZeroChannel, "channel matrix is all zero");
  Eigen::MatrixXcd zeta = h / std::sqrt(g);
  return {g, std::move(zeta)};
}

double NoiseVarFromSnr(double snr_db, double mean_power) {
  return mean_power / std::pow(10.0, snr_db / 10.0);
}

std::vector<std::size_t> DrawMessages(const MessageSpace& space, std::size_t n,
                                      RandomStream& rng) {
  std::vector<std::size_t> out(n);
  for (auto& m : out) m = static_cast<std::size_t>(rng.UniformInt(space.total()));
  return out;
}

Eigen::MatrixXcd DrawNoise(std::size_t n, int rx, double noise_var,
                           const DistanceKernel& kernel, RandomStream& rng) {
  const double var = kernel.ComplexVariance(noise_var);
  Eigen::MatrixXcd noise(static_cast<Eigen::Index>(n), rx);
  for (Eigen::Index i = 0; i < noise.rows(); ++i)
    for (int r = 0; r < rx; ++r) noise(i, r) = rng.ComplexNormal(var);
  return noise;
}

ObservationBatch Observe(const Constellation& constellation, const ChannelSet& channels,
                         int user, std::span<const std::size_t> messages,
                         const Eigen::MatrixXcd& noise) {
  // Noiseless projections of every point, |W| x R.
  const Eigen::MatrixXcd proj = constellation.points() * channels.zeta(user).conjugate();
  ObservationBatch batch{{messages.begin(), messages.end()}, noise, user};
  for (std::size_t n = 0; n < messages.size(); ++n)
    batch.y.row(static_cast<Eigen::Index>(n)) += proj.row(static_cast<Eigen::Index>(messages[n]));
  return batch;
}

ObservationBatch SimulateObservations(const Constellation& constellation,
                                      const ChannelSet& channels, int user,
                                      std::span<const std::size_t> messages,
                                      const DistanceKernel& kernel, RandomStream& rng) {
  const Eigen::MatrixXcd noise =
      DrawNoise(messages.size(), channels.rx(), channels.noise_var(user), kernel, rng);
  return Observe(constellation, channels, user, messages, noise);
}

}  // namespace jcd
