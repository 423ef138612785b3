#include "jcd/precoders.hpp"

#include <string>

#include "jcd/error.hpp"
#include "jcd/optimizer.hpp"

namespace jcd {

std::string_view EncoderName(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::kMatched: return "matched";
    case EncoderKind::kZeroForcing: return "zf";
    case EncoderKind::kMmse: return "mmse";
  }
  return "?";
}

EncoderKind ParseEncoder(std::string_view name) {
  if (name == "matched") return EncoderKind::kMatched;
  if (name == "zf" || name == "zero_forcing") return EncoderKind::kZeroForcing;
  if (name == "mmse") return EncoderKind::kMmse;
  throw Error(ErrorCode::kValidationError, "unknown encoder '" + std::string(name) + "'");
}

Eigen::MatrixXd BpskMap(const MessageSpace& space) {
  for (int k = 0; k < space.users(); ++k)
    if (space.size(k) != 2)
      throw Error(ErrorCode::kUnsupportedAlphabet,
                  "BPSK mapping needs binary alphabets; user " + std::to_string(k) +
                      " has " + std::to_string(space.size(k)) + " symbols");
  Eigen::MatrixXd map(static_cast<Eigen::Index>(space.total()), space.users());
  for (std::size_t j = 0; j < space.total(); ++j)
    for (int k = 0; k < space.users(); ++k)
      map(static_cast<Eigen::Index>(j), k) = space.Symbol(j, k) == 0 ? 1.0 : -1.0;
  return map;
}

EncodingMatrix MatchedEncoder(const ChannelSet& channels) {
  return {channels.Concatenated(), EncoderKind::kMatched};
}

EncodingMatrix ZeroForcingEncoder(const ChannelSet& channels) {
  const Eigen::MatrixXcd zeta = channels.Concatenated();
  const Eigen::MatrixXcd gram = zeta.adjoint() * zeta;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (!(smallest > 0.0) || s(0) / smallest > kMaxConditionNumber)
    throw Error(ErrorCode::kRankDeficient,
                "zeta^H zeta is rank deficient; zero-forcing is undefined");
  return {zeta * gram.partialPivLu().inverse(), EncoderKind::kZeroForcing};
}

EncodingMatrix MmseEncoder(const ChannelSet& channels) {
  const Eigen::MatrixXcd zeta = channels.Concatenated();
  Eigen::MatrixXcd reg = zeta.adjoint() * zeta;
  for (int k = 0; k < channels.users(); ++k)
    for (int r = 0; r < channels.rx(); ++r)
      reg(k * channels.rx() + r, k * channels.rx() + r) += channels.noise_var(k);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(reg);
  if (!lu.isInvertible())
    throw Error(ErrorCode::kSingularRegularizedMatrix,
                "zeta^H zeta + Sigma is numerically singular");
  return {zeta * lu.inverse(), EncoderKind::kMmse};
}

EncodingMatrix BuildEncoder(EncoderKind kind, const ChannelSet& channels) {
  switch (kind) {
    case EncoderKind::kMatched: return MatchedEncoder(channels);
    case EncoderKind::kZeroForcing: return ZeroForcingEncoder(channels);
    case EncoderKind::kMmse: return MmseEncoder(channels);
  }
  throw Error(ErrorCode::kValidationError, "unknown encoder");
}

Constellation LinearConstellation(const EncodingMatrix& enc, const MessageSpace& space) {
  const Eigen::MatrixXd map = BpskMap(space);
  const auto streams = enc.matrix.cols();
  if (streams % space.users() != 0)
    throw Error(ErrorCode::kValidationError,
                "encoding matrix columns do not match the user count");
  const auto rx = streams / space.users();
  Eigen::MatrixXcd symbols(map.rows(), streams);
  for (int k = 0; k < space.users(); ++k)
    for (Eigen::Index r = 0; r < rx; ++r)
      symbols.col(k * rx + r) = map.col(k).cast<Complex>();
  return Constellation(symbols * enc.matrix.transpose());
}

Constellation BuildLinearConstellation(const EncodingMatrix& enc, const MessageSpace& space,
                                       const PowerConstraint& pc) {
  return ProjectConstraints(LinearConstellation(enc, space), pc);
}

}  // namespace jcd
