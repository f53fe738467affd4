#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <map>

#include "doctest.h"
#include "qmse/cspsa.hpp"
#include "qmse/errors.hpp"

using namespace qmse;

namespace {

const Complex I{0.0, 1.0};
const std::array<Complex, 4> kDirections{Complex{1.0, 0.0}, Complex{-1.0, 0.0}, I, -I};

AmplitudeVector vec(std::initializer_list<Complex> xs) {
  AmplitudeVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

// Mean of the perturbation gradient estimate of f(z) = |z - w|^2 over all
// 4^d perturbation vectors, with exact function values.
Eigen::VectorXcd enumerated_gradient(const AmplitudeVector& z, const AmplitudeVector& w, double c) {
  const auto d = static_cast<int>(z.size());
  int combos = 1;
  for (int i = 0; i < d; ++i) combos *= 4;
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(d);
  PerturbationVector delta(d);
  for (int code = 0; code < combos; ++code) {
    int rest = code;
    for (int i = 0; i < d; ++i, rest /= 4) delta(i) = kDirections[static_cast<std::size_t>(rest % 4)];
    const CspsaState state{z, 0};
    const auto [zp, zm] = probes(state, delta, c);
    sum += gradient_estimate((zp - w).squaredNorm(), (zm - w).squaredNorm(), c, delta);
  }
  return sum / static_cast<double>(combos);
}

}  // namespace

TEST_CASE("gains_at") {
  GainSchedule g{1.0, 0.0, 1.0, 1.0, 1.0 / 6.0};
  CHECK(gains_at(g, 0).a_k == doctest::Approx(1.0));
  CHECK(gains_at(g, 0).c_k == doctest::Approx(1.0));
  g.a = 3.0;
  CHECK(gains_at(g, 9).a_k == doctest::Approx(0.3));

  const GainSchedule defaults;
  Gains prev = gains_at(defaults, 0);
  for (std::uint64_t k = 1; k <= 10000; ++k) {
    const Gains cur = gains_at(defaults, k);
    CHECK(cur.a_k > 0.0);
    CHECK(cur.c_k > 0.0);
    CHECK(cur.a_k <= prev.a_k);
    CHECK(cur.c_k <= prev.c_k);
    prev = cur;
  }
}

TEST_CASE("gain schedule validation") {
  CHECK_NOTHROW(GainSchedule{}.validate());
  CHECK_THROWS_AS((GainSchedule{0.0, 0.0, 1.0, 0.1, 0.2}.validate()), InvalidGain);
  CHECK_THROWS_AS((GainSchedule{1.0, -1.0, 1.0, 0.1, 0.2}.validate()), InvalidGain);
  CHECK_THROWS_AS((GainSchedule{1.0, 0.0, 1.0, 0.0, 0.2}.validate()), InvalidGain);
}

TEST_CASE("sample_perturbation") {
  RngStream rng(31, 0);
  const PerturbationVector delta = sample_perturbation(16, rng);
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    CHECK(std::abs(delta(i)) == 1.0);
    CHECK((delta(i).real() == 0.0 || delta(i).imag() == 0.0));
  }

  RngStream a(5, 5), b(5, 5);
  CHECK(sample_perturbation(8, a) == sample_perturbation(8, b));

  std::map<std::pair<double, double>, int> freq;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Complex x = sample_perturbation(1, rng)(0);
    ++freq[{x.real(), x.imag()}];
  }
  CHECK(freq.size() == 4);
  for (const auto& [value, count] : freq) CHECK(std::abs(count / double(draws) - 0.25) <= 0.005);
}

TEST_CASE("probes") {
  const CspsaState state{vec({1.0, 0.0}), 0};
  const PerturbationVector delta = vec({1.0, I});
  const auto [same_p, same_m] = probes(state, delta, 0.0);
  CHECK(same_p == state.iterate);
  CHECK(same_m == state.iterate);

  const auto [zp, zm] = probes(state, delta, 0.1);
  CHECK((zp - vec({1.1, 0.1 * I})).norm() < 1e-15);
  CHECK((zm - vec({0.9, -0.1 * I})).norm() < 1e-15);
  CHECK((zp + zm - 2.0 * state.iterate).norm() < 1e-15);
}

TEST_CASE("gradient_estimate") {
  RngStream rng(2, 0);
  const PerturbationVector delta = sample_perturbation(5, rng);
  CHECK(gradient_estimate(0.7, 0.7, 0.1, delta).norm() == 0.0);
  CHECK(gradient_estimate(1.0, 0.0, 0.5, vec({1.0}))(0) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(gradient_estimate(1.0, 0.0, 0.0, delta), InvalidGain);
  CHECK_THROWS_AS(gradient_estimate(1.0, 0.0, -0.1, delta), InvalidGain);

  const Eigen::VectorXcd g = gradient_estimate(0.9, 0.2, 0.3, delta);
  const Eigen::VectorXcd swapped = gradient_estimate(0.2, 0.9, 0.3, delta);
  CHECK((g + swapped).norm() < 1e-15);
  for (Eigen::Index i = 1; i < g.size(); ++i) CHECK(std::abs(g(i)) == doctest::Approx(std::abs(g(0))));
}

TEST_CASE("averaged gradient estimate equals the Wirtinger gradient of a quadratic") {
  // f(z) = |z - w|^2 has d f / d z* = z - w. Averaging over every perturbation
  // vector cancels the cross terms exactly.
  RngStream rng(1234, 0);
  for (int d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      AmplitudeVector z(d), w(d);
      for (int i = 0; i < d; ++i) {
        z(i) = rng.complex_normal();
        w(i) = rng.complex_normal();
      }
      const double c = 0.05 + rng.uniform();
      CHECK((enumerated_gradient(z, w, c) - (z - w)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("step") {
  const CspsaState state{vec({1.0, 0.0}), 4};
  const CspsaState same = step(state, Eigen::VectorXcd::Zero(2), 0.5);
  CHECK(same.iterate == state.iterate);
  CHECK(same.iteration == 5);

  const CspsaState moved = step(state, vec({0.5, 0.0}), 0.2);
  CHECK((moved.iterate - vec({0.9, 0.0})).norm() < 1e-15);

  CHECK_THROWS_AS(step(state, vec({1.0, 0.0}), 1.0), DegenerateIterate);
  CHECK_THROWS_AS(step(state, vec({1.0}), 1.0), DimensionError);
}
