#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jcd/error.hpp"
#include "jcd/model.hpp"

using namespace jcd;

TEST_CASE("joint messages enumerate in mixed radix, user 0 most significant") {
  CHECK(EnumerateJointMessages(MessageSpace({2, 2})) ==
        std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(EnumerateJointMessages(MessageSpace({2})) == std::vector<std::vector<int>>{{0}, {1}});

  const auto six = EnumerateJointMessages(MessageSpace({2, 3}));
  REQUIRE(six.size() == 6);
  CHECK(six[5] == std::vector<int>{1, 2});
  CHECK(six[3] == std::vector<int>{1, 0});
  CHECK(MessageSpace({2, 3}).Label(5) == "12");
}

TEST_CASE("index <-> digits round trip") {
  for (const auto& sizes : {std::vector<int>{2, 2, 2}, {3, 2, 4}, {5}, {2, 7, 3, 2}}) {
    const MessageSpace space(sizes);
    std::size_t expected_total = 1;
    for (int s : sizes) expected_total *= static_cast<std::size_t>(s);
    REQUIRE(space.total() == expected_total);
    for (std::size_t j = 0; j < space.total(); ++j) {
      const auto d = space.Digits(j);
      CHECK(space.Index(d) == j);
      for (int k = 0; k < space.users(); ++k) CHECK(space.Symbol(j, k) == d[k]);
    }
  }
  CHECK_THROWS_AS(MessageSpace({2, 1}), Error);
  CHECK_THROWS_AS(MessageSpace(std::vector<int>{}), Error);
}

TEST_CASE("normalize_channel") {
  Eigen::MatrixXcd h(2, 1);
  h << 2.0, 0.0;
  auto [g, z] = NormalizeChannel(h);
  CHECK(g == doctest::Approx(4.0));
  CHECK(z(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(z(1, 0)) == 0.0);

  h << 1.0, 1.0;
  std::tie(g, z) = NormalizeChannel(h);
  CHECK(g == doctest::Approx(2.0));
  CHECK(z(0, 0).real() == doctest::Approx(std::numbers::sqrt2 / 2));
  CHECK(z(1, 0).real() == doctest::Approx(std::numbers::sqrt2 / 2));

  Eigen::MatrixXcd unit(2, 1);
  unit << Complex{0.6, 0.0}, Complex{0.0, 0.8};
  std::tie(g, z) = NormalizeChannel(unit);
  CHECK(g == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((z - unit).norm() < 1e-15);

  CHECK_THROWS_AS(NormalizeChannel(Eigen::MatrixXcd::Zero(2, 1)), Error);
  try {
    NormalizeChannel(Eigen::MatrixXcd::Zero(3, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroChannel);
  }
}

TEST_CASE("normalize_channel property: unit norm and gain recovers the energy") {
  RandomStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXcd h(3, 2);
    const double scale = std::pow(10.0, rng.Uniform() * 6 - 3);
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = scale * rng.ComplexNormal();
    const auto [g, z] = NormalizeChannel(h);
    CHECK(std::abs(z.squaredNorm() - 1.0) <= 1e-12);
    CHECK(std::abs(g * z.squaredNorm() - h.squaredNorm()) <= 1e-12 * h.squaredNorm());
  }
}

TEST_CASE("noise variance from SNR") {
  CHECK(NoiseVarFromSnr(0.0, 1.0) == 1.0);
  CHECK(NoiseVarFromSnr(6.0, 1.0) == doctest::Approx(0.251189).epsilon(1e-6));
  CHECK(NoiseVarFromSnr(8.0, 1.0) == doctest::Approx(0.158489).epsilon(1e-6));

  RandomStream rng(9);
  double prev = NoiseVarFromSnr(-20.0, 2.0);
  for (double s = -19.5; s <= 30.0; s += 0.5) {
    const double v = NoiseVarFromSnr(s, 2.0);
    CHECK(v < prev);
    prev = v;
  }
  for (int i = 0; i < 50; ++i) {
    const double v = std::pow(10.0, rng.Uniform() * 8 - 4);
    const double pm = 0.1 + rng.Uniform() * 10;
    const double back = NoiseVarFromSnr(10.0 * std::log10(pm / v), pm);
    CHECK(std::abs(back / v - 1.0) <= 1e-12);
  }
}

TEST_CASE("channel set and power constraint validation") {
  Eigen::MatrixXcd z(2, 1);
  z << 1.0, 0.0;
  CHECK_NOTHROW(ChannelSet({z}, {1.0}, {0.5}));
  CHECK_THROWS_AS(ChannelSet({z}, {1.0}, {0.0}), Error);
  CHECK_THROWS_AS(ChannelSet({2.0 * z}, {1.0}, {0.5}), Error);
  CHECK_THROWS_AS((PowerConstraint{1.0, 0.5}.Validate()), Error);
  CHECK_THROWS_AS((PowerConstraint{0.0, 4.0}.Validate()), Error);
  CHECK_NOTHROW((PowerConstraint{1.0, 4.0}.Validate()));

  Eigen::MatrixXcd bad(1, 1);
  bad << Complex{std::nan(""), 0.0};
  CHECK_THROWS_AS(Constellation{bad}, Error);
}

namespace {

ChannelSet ScalarChannel(double noise_var) {
  Eigen::MatrixXcd z(1, 1);
  z << 1.0;
  return ChannelSet({z}, {1.0}, {noise_var});
}

}  // namespace

TEST_CASE("simulate_observations: noiseless limit is the projection") {
  RandomStream rng(1);
  Eigen::MatrixXcd pts(4, 2);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = rng.ComplexNormal();
  Eigen::MatrixXcd h(2, 1);
  h << Complex{0.3, -0.4}, Complex{0.5, 0.1};
  const auto chan = ChannelSet::FromMatrices({h}, {1e-300});
  const std::vector<std::size_t> msgs{0, 3, 1, 2, 2};
  const auto batch = SimulateObservations(Constellation(pts), chan, 0, msgs, {}, rng);
  for (std::size_t n = 0; n < msgs.size(); ++n) {
    const Complex expected = (chan.zeta(0).adjoint() * pts.row(msgs[n]).transpose())(0, 0);
    CHECK(std::abs(batch.y(n, 0) - expected) < 1e-12);
  }
}

TEST_CASE("simulate_observations: sample mean and noise variance") {
  Eigen::MatrixXcd one(2, 1);
  one << 1.0, -1.0;
  const Constellation c(one);
  const std::size_t n = 100000;
  const std::vector<std::size_t> msgs(n, 0);
  for (auto conv : {NoiseConvention::kPaper, NoiseConvention::kCircular}) {
    const double var = 0.5;
    const DistanceKernel kernel{conv};
    RandomStream rng(21);
    const auto batch = SimulateObservations(c, ScalarChannel(var), 0, msgs, kernel, rng);
    const Complex mean = batch.y.col(0).mean();
    const double sigma = std::sqrt(kernel.ComplexVariance(var));
    CHECK(std::abs(mean.real() - 1.0) < 3 * sigma / std::sqrt(double(n)));
    const double emp = (batch.y.col(0).array() - Complex{1.0, 0.0}).abs2().mean();
    CHECK(std::abs(emp / kernel.ComplexVariance(var) - 1.0) < 0.05);
    // Real part alone: sigma^2 under the paper reading, sigma^2/2 under circular.
    const double re_var = (batch.y.col(0).real().array() - 1.0).square().mean();
    CHECK(re_var == doctest::Approx(conv == NoiseConvention::kPaper ? var : var / 2).epsilon(0.03));
  }
}

TEST_CASE("simulate_observations is bit-identical for the same stream") {
  Eigen::MatrixXcd pts(4, 2);
  RandomStream init(4);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = init.ComplexNormal();
  Eigen::MatrixXcd h(2, 1);
  h << 1.0, 2.0;
  const auto chan = ChannelSet::FromMatrices({h}, {0.3});
  RandomStream a(99), b(99);
  const auto msgs = DrawMessages(MessageSpace({2, 2}), 500, a);
  const auto msgs_b = DrawMessages(MessageSpace({2, 2}), 500, b);
  REQUIRE(msgs == msgs_b);
  const auto ya = SimulateObservations(Constellation(pts), chan, 0, msgs, {}, a).y;
  const auto yb = SimulateObservations(Constellation(pts), chan, 0, msgs, {}, b).y;
  CHECK(ya == yb);
}
