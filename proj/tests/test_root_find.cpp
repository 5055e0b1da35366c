#include <doctest.h>

#include <cmath>

#include "epon/model.hpp"
#include "epon/root_find.hpp"
#include "fixtures.hpp"

TEST_CASE("linear root") {
  const double r = epon::find_root_bracketed([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-12);
  CHECK(r == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("root on the bracket endpoint") {
  // w*e^w + 1/e has its root exactly at the left endpoint of [-1, 0].
  auto f = [](double w) { return w * std::exp(w) + 0.36787944117144233; };
  const double r = epon::find_root_bracketed(f, -1.0, 0.0, 1e-12);
  CHECK(r == -1.0);
}

TEST_CASE("missing sign change is rejected") {
  CHECK_THROWS_AS(
      epon::find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
      epon::BracketError);
}

TEST_CASE("locates the small stationary point of the reference system") {
  const epon::SystemParams p = fixtures::reference(350e-6);
  const double h = epon::attempt_probability_exact(p);
  // Bracket [0, x0] where the balance residual is monotone.
  auto f = [&](double x) { return epon::characteristic_residual(x, p, h); };
  const double r = epon::find_root_bracketed(f, 0.0, 0.1, 1e-14);
  CHECK(r == doctest::Approx(fixtures::kRoot350).epsilon(1e-9));
}

TEST_CASE("deterministic") {
  auto f = [](double x) { return std::cos(x) - x; };
  const double a = epon::find_root_bracketed(f, 0.0, 1.0, 1e-13);
  const double b = epon::find_root_bracketed(f, 0.0, 1.0, 1e-13);
  CHECK(a == b);
}
