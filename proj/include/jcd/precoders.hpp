#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "jcd/model.hpp"

namespace jcd {

enum class EncoderKind { kMatched, kZeroForcing, kMmse };

std::string_view EncoderName(EncoderKind kind);
EncoderKind ParseEncoder(std::string_view name);

struct EncodingMatrix {
  Eigen::MatrixXcd matrix;  // T x (K*R)
  EncoderKind kind;
};

// Gram matrices with a condition number above this are treated as singular.
inline constexpr double kMaxConditionNumber = 1e12;

// BPSK symbol of every user for every joint message: row j holds
// phi_map(w) with 0 -> +1 and 1 -> -1. Size |W| x K.
Eigen::MatrixXd BpskMap(const MessageSpace& space);

EncodingMatrix MatchedEncoder(const ChannelSet& channels);
EncodingMatrix ZeroForcingEncoder(const ChannelSet& channels);
// M = zeta (zeta^H zeta + Sigma)^-1, Sigma = diag of per-stream noise variances.
EncodingMatrix MmseEncoder(const ChannelSet& channels);
EncodingMatrix BuildEncoder(EncoderKind kind, const ChannelSet& channels);

// X(w) = M phi_map(w) for every joint message, before projection. With R > 1
// each user's symbol drives all R of its columns.
Constellation LinearConstellation(const EncodingMatrix& enc, const MessageSpace& space);

// LinearConstellation followed by the optimizer's constraint projection.
Constellation BuildLinearConstellation(const EncodingMatrix& enc, const MessageSpace& space,
                                       const PowerConstraint& pc);

}  // namespace jcd
