#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jcd/error.hpp"
#include "jcd/metrics.hpp"
#include "oracles.hpp"

using namespace jcd;

namespace {

ChannelSet Scalar(double var) {
  Eigen::MatrixXcd z(1, 1);
  z << 1.0;
  return ChannelSet({z}, {1.0}, {var});
}

Constellation Antipodal(double a = 1.0) {
  Eigen::MatrixXcd x(2, 1);
  x << a, -a;
  return Constellation(x);
}

Eigen::RowVectorXcd Obs(Complex v) {
  Eigen::RowVectorXcd y(1);
  y << v;
  return y;
}

struct Instance {
  Constellation constellation;
  ChannelSet channels;
  MessageSpace space;
};

Instance RandomInstance(RandomStream& rng, std::vector<int> sizes, int t, int r) {
  const MessageSpace space(sizes);
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(space.total()), t);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.ComplexNormal();
  std::vector<Eigen::MatrixXcd> h;
  std::vector<double> v;
  for (int k = 0; k < space.users(); ++k) {
    Eigen::MatrixXcd m(t, r);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.ComplexNormal();
    h.push_back(m);
    v.push_back(0.05 + rng.Uniform());
  }
  return {Constellation(x), ChannelSet::FromMatrices(h, v), space};
}

}  // namespace

TEST_CASE("distances") {
  const auto c = Antipodal();
  CHECK(Distances(c, Scalar(1.0), 0, Obs(1.0))(0) == 0.0);
  CHECK(Distances(c, Scalar(1.0), 0, Obs(0.0))(0) == doctest::Approx(0.5));
  CHECK(Distances(c, Scalar(1.0), 0, Obs(0.0), {NoiseConvention::kCircular})(0) ==
        doctest::Approx(1.0));
  const auto d1 = Distances(c, Scalar(0.7), 0, Obs({0.3, -0.2}));
  const auto d3 = Distances(c, Scalar(2.1), 0, Obs({0.3, -0.2}));
  CHECK((d1 / 3.0 - d3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("llr0 hand values") {
  const MessageSpace one({2});
  const auto c = Antipodal();
  CHECK(Llr0(c, Scalar(1.0), one, 0, 0, Obs(0.0)) == 0.0);
  CHECK(Llr0(c, Scalar(1.0), one, 0, 0, Obs(1.0)) == doctest::Approx(2.0));
  CHECK(Llr0(c, Scalar(1.0), one, 0, 1, Obs(1.0)) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(Llr0(c, Scalar(1.0), one, 0, 2, Obs(1.0)), Error);
}

TEST_CASE("llr0 is invariant to a common distance shift") {
  // Moving y along the imaginary axis adds the same |Im y|^2 to every distance
  // of a real constellation. Cancellation error grows with the shift.
  const MessageSpace space({2, 2});
  Eigen::MatrixXcd x(4, 1);
  x << 1.3, -0.2, 0.4, -1.5;
  const Constellation c(x);
  for (double shift : {0.0, 3.0, 30.0, 300.0}) {
    CHECK(Llr0(c, Scalar(0.5), space, 0, 0, Obs({0.25, shift})) ==
          doctest::Approx(Llr0(c, Scalar(0.5), space, 0, 0, Obs({0.25, 0.0}))).epsilon(1e-8));
  }
}

TEST_CASE("llr0 stays finite for huge distances") {
  const MessageSpace space({2, 2});
  Eigen::MatrixXcd x(4, 1);
  x << 1.0, 2.0, -1.0, -2.0;
  const Constellation c(x);
  for (double y : {1e2, 1e3, 1e4}) {
    const double l = Llr0(c, Scalar(1e-2), space, 0, 0, Obs(y));
    CHECK(std::isfinite(l));
    CHECK(std::abs(l) <= kLlrCap);
  }
  // sigma -> 0 on a point: capped certainty.
  CHECK(Llr0(c, Scalar(1e-300), space, 0, 0, Obs(1.0)) == kLlrCap);
  CHECK(Llr(c, Scalar(1e-300), space, 0, 0, Obs(1.0)) == kLlrCap);
}

TEST_CASE("llr matches llr0 and the uniform-posterior value") {
  RandomStream rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = RandomInstance(rng, {2, 4, 3}, 2, 2);
    Eigen::RowVectorXcd y(2);
    y << rng.ComplexNormal(), rng.ComplexNormal();
    for (int k = 0; k < 3; ++k)
      for (int w = 0; w < inst.space.size(k); ++w)
        CHECK(Llr(inst.constellation, inst.channels, inst.space, k, w, y) ==
              doctest::Approx(Llr0(inst.constellation, inst.channels, inst.space, k, w, y))
                  .epsilon(1e-12));
  }
  // Four-symbol user with identical likelihoods: 1 vs 3 hypotheses.
  const MessageSpace four({4});
  Eigen::MatrixXcd same = Eigen::MatrixXcd::Constant(4, 1, 0.5);
  CHECK(Llr(Constellation(same), Scalar(1.0), four, 0, 2, Obs(0.1)) ==
        doctest::Approx(-std::log(3.0)));
}

TEST_CASE("posterior and sample loss") {
  CHECK(Posterior(0.0) == 0.5);
  CHECK(Posterior(kLlrCap) == doctest::Approx(1.0));
  CHECK(Posterior(-kLlrCap) >= kPosteriorFloor);
  CHECK(Posterior(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(SampleLossFromLlr(0.0) == doctest::Approx(1.0));
  CHECK(SampleLossFromLlr(kLlrCap) < 1e-300);
  CHECK(SampleLossFromLlr(2.0) == doctest::Approx(0.18311841208159615).epsilon(1e-12));
  CHECK(SampleLossFromLlr(2.0) == doctest::Approx(-std::log2(Posterior(2.0))).epsilon(1e-12));
  CHECK(SampleLossFromLlr(-800.0) == doctest::Approx(kLlrCap / std::numbers::ln2));
}

TEST_CASE("binary llr0 antisymmetry and posterior consistency") {
  RandomStream rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = RandomInstance(rng, {2, 2, 2}, 2, 1);
    Eigen::RowVectorXcd y(1);
    y << 2.0 * rng.ComplexNormal();
    for (int k = 0; k < 3; ++k) {
      const double l0 = Llr0(inst.constellation, inst.channels, inst.space, k, 0, y);
      const double l1 = Llr0(inst.constellation, inst.channels, inst.space, k, 1, y);
      CHECK(l0 == -l1);
      CHECK(std::abs(Posterior(l0) + Posterior(l1) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("batch loss") {
  const MessageSpace one({2});
  const auto c = Antipodal();
  // y = 0 for every sample: llr0 = 0, one bit each.
  ObservationBatch zero{{0, 1, 0, 1}, Eigen::MatrixXcd::Zero(4, 1), 0};
  CHECK(BatchLoss(c, Scalar(1.0), one, zero) == doctest::Approx(1.0));

  ObservationBatch single{{0}, Obs(1.0), 0};
  CHECK(BatchLoss(c, Scalar(1.0), one, single) ==
        SampleLoss(c, Scalar(1.0), one, 0, 0, Obs(1.0)));

  RandomStream rng(2);
  const auto msgs = DrawMessages(one, 2000, rng);
  const auto batch = SimulateObservations(c, Scalar(1e-6), 0, msgs, {}, rng);
  CHECK(BatchLoss(c, Scalar(1e-6), one, batch) < 1e-6);
}

TEST_CASE("batch loss equals the indicator double sum") {
  RandomStream rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = RandomInstance(rng, {2, 2}, 2, 1);
    const auto msgs = DrawMessages(inst.space, 64, rng);
    for (int k = 0; k < 2; ++k) {
      const auto batch = SimulateObservations(inst.constellation, inst.channels, k, msgs, {}, rng);
      double sum = 0.0;
      for (std::size_t n = 0; n < msgs.size(); ++n) {
        double inner = 0.0;
        for (int w = 0; w < inst.space.size(k); ++w)
          if (inst.space.Symbol(msgs[n], k) == w)
            inner += SampleLoss(inst.constellation, inst.channels, inst.space, k, w, batch.y.row(n));
        sum += inner;
      }
      CHECK(BatchLoss(inst.constellation, inst.channels, inst.space, batch) ==
            sum / static_cast<double>(msgs.size()));
    }
  }
}

TEST_CASE("loss report max and tie-break") {
  const auto r = LossReport::FromLosses({0.4, 0.7, 0.7, 0.1});
  CHECK(r.max_loss == 0.7);
  CHECK(r.argmax_user == 1);
  CHECK(LossReport::FromLosses({0.3}).argmax_user == 0);
  CHECK(LossReport::FromLosses({0.5, 0.5}).argmax_user == 0);
}

TEST_CASE("gauss-hermite oracle reproduces frozen reference values") {
  // Frozen from an adaptive-quadrature evaluation of the same integral.
  CHECK(testing::BpskMiQuadrature(1.0) == doctest::Approx(0.48594415413293535).epsilon(1e-9));
  CHECK(testing::BpskMiQuadrature(std::pow(10.0, -0.6)) ==
        doctest::Approx(0.9118804545871194).epsilon(1e-9));
  CHECK(testing::BpskMiQuadrature(0.1) == doctest::Approx(0.9967563279900297).epsilon(1e-9));
}

TEST_CASE("estimate_mi limits and range") {
  const MessageSpace one({2});
  RandomStream rng(10);
  const auto hi = EstimateMi(Antipodal(), Scalar(1e-6), one, 0, 10000, rng);
  CHECK(hi.mi >= 0.999);
  const auto lo = EstimateMi(Antipodal(), Scalar(1e6), one, 0, 10000, rng);
  CHECK(lo.mi <= 0.01);
  CHECK(lo.mi >= 0.0);
  CHECK_THROWS_AS(EstimateMi(Antipodal(), Scalar(1.0), one, 0, 999, rng), Error);

  const auto mid = EstimateMi(Antipodal(), Scalar(0.251188643150958), one, 0, 100000, rng);
  CHECK(std::abs(mid.mi - testing::BpskMiQuadrature(0.251188643150958)) < 0.005);
  CHECK(mid.std_error > 0.0);
  CHECK(mid.raw_mi == doctest::Approx(1.0 - mid.loss));
}

TEST_CASE("estimate_mi is unbiased against the quadrature oracle") {
  const MessageSpace one({2});
  const double var = std::pow(10.0, -0.6);
  const double truth = testing::BpskMiQuadrature(var);
  const RandomStream base(123);
  double sum = 0.0, se2 = 0.0;
  const int reps = 50;
  for (int i = 0; i < reps; ++i) {
    const auto e = EstimateMi(Antipodal(), Scalar(var), one, 0, 2000, base.Substream(i));
    sum += e.raw_mi;
    se2 += e.std_error * e.std_error;
  }
  const double pooled = std::sqrt(se2) / reps;
  CHECK(std::abs(sum / reps - truth) < 3.0 * pooled);
}

TEST_CASE("estimate_mi is nonincreasing in the noise variance") {
  const MessageSpace space({2, 2});
  Eigen::MatrixXcd x(4, 2);
  x << 1.0, 0.2, -0.4, 0.9, 0.6, -1.1, -0.8, -0.3;
  const Constellation c(x);
  Eigen::MatrixXcd h(2, 1);
  h << 0.8, 0.6;
  double prev_mi = 2.0, prev_se = 0.0;
  const RandomStream rng(5);
  for (double var : {0.01, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    const auto chan = ChannelSet::FromMatrices({h, h}, {var, var});
    const auto e = EstimateMi(c, chan, space, 0, 20000, rng);
    CHECK(e.mi <= prev_mi + 2.0 * std::max(prev_se, e.std_error));
    prev_mi = e.mi;
    prev_se = e.std_error;
  }
}
