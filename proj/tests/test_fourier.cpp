#include <cmath>
#include <random>

#include "doctest.h"
#include "mcf/fourier.hpp"

using namespace mcf;

namespace {
RVec v2(double a, double b) {
  RVec x(2);
  x << a, b;
  return x;
}
}  // namespace

TEST_CASE("cutoff profiles") {
  for (auto eta : {CutoffProfile::raised_cosine(), CutoffProfile::smooth_step()}) {
    CHECK(eta(0.0) == 1.0);
    CHECK(eta(1.0) == 1.0);
    CHECK(eta(2.0) == 0.0);
    CHECK(eta(5.0) == 0.0);
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.01) {
      CHECK(eta(t) <= prev + 1e-15);
      prev = eta(t);
    }
    CHECK(eta.scaled(6.0, 4.0) == eta(1.5));
  }
}

TEST_CASE("symbols are 0-homogeneous and compose") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const auto cone = MultiplierSymbol::cone_cutoff(2, v2(1, 0), M_PI / 4);
  const auto half = MultiplierSymbol::half_space(2, v2(0, 1));
  for (int t = 0; t < 10; ++t) {
    const RVec xi = v2(nd(rng), nd(rng));
    const double s = 0.1 + std::abs(nd(rng)) * 10;
    CHECK((cone(xi) - cone(s * xi)).norm() < 1e-14);
    CHECK((half(xi) - half(s * xi)).norm() < 1e-14);
    const auto prod = cone.compose(half)(xi);
    CHECK((prod - cone(xi) * half(xi)).norm() < 1e-14);
    CHECK((cone.adjoint()(xi) - cone(xi).adjoint()).norm() < 1e-14);
  }
  CHECK(cone(v2(1, 0))(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(cone(v2(0, 1))(0, 0)) == 0.0);
  CHECK(half(v2(1, 0))(0, 0) == 0.0);  // boundary of the open half-space
  CHECK_THROWS_AS(cone(v2(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(cone.compose(MultiplierSymbol::identity(3)), std::invalid_argument);

  const CMat plus = CMat::Constant(1, 1, 2.0), minus = CMat::Constant(1, 1, -1.0);
  const auto pr = MultiplierSymbol::pair(plus, minus, "pm");
  CHECK(pr(RVec::Constant(1, 3.0))(0, 0) == cplx(2.0));
  CHECK(pr(RVec::Constant(1, -0.5))(0, 0) == cplx(-1.0));
}

TEST_CASE("multiplier modes") {
  const Grid g(1, 64);
  const auto u = sample_field(
      [](const RVec& x) {
        return CVec::Constant(1, 1.0 + std::cos(2 * M_PI * x[0]) + std::sin(2 * M_PI * 10 * x[0]));
      },
      g, 1);
  const auto id = MultiplierSymbol::identity(1);
  const auto full = apply_multiplier(id, u, FullMode{});
  CHECK(std::abs(integrate(full)) < 1e-12);  // zero bin dropped
  const auto high = apply_multiplier(id, u, HighpassMode{4, CutoffProfile::raised_cosine()});
  const auto low = apply_multiplier(id, u, BandlimitMode{4, CutoffProfile::raised_cosine()});
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(high(i, 0) + low(i, 0) - u(i, 0)));
  CHECK(err < 1e-12);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i)[0];
    CHECK(std::abs(high(i, 0) - std::sin(2 * M_PI * 10 * x)) < 1e-12);
  }
  CHECK_THROWS_WITH(apply_multiplier(id, u, HighpassMode{32, CutoffProfile::raised_cosine()}),
                    "cutoff exceeds grid resolution");
  CHECK_THROWS_AS(apply_multiplier(MultiplierSymbol::identity(2), u, FullMode{}), std::invalid_argument);
}

TEST_CASE("half-line symbol splits a real oscillation") {
  const Grid g(1, 64);
  const auto u = sample_field([](const RVec& x) { return CVec::Constant(1, std::cos(2 * M_PI * 5 * x[0])); }, g, 1);
  const auto pos = apply_multiplier(MultiplierSymbol::half_space(1, RVec::Constant(1, 1.0)), u, FullMode{});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i)[0];
    CHECK(std::abs(pos(i, 0) - 0.5 * std::exp(cplx(0, 2 * M_PI * 5 * x))) < 1e-12);
  }
}

TEST_CASE("lattice symbols") {
  const Grid g(1, 32);
  const auto u = sample_field([](const RVec& x) { return CVec::Constant(1, std::sin(2 * M_PI * 3 * x[0])); }, g, 1);
  const auto du = apply_lattice_symbol([](const RVec& k) { return CMat::Constant(1, 1, cplx(0, 2 * M_PI * k[0])); }, 1, u);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(du(i, 0) - 6 * M_PI * std::cos(2 * M_PI * 3 * g.point(i)[0])) < 1e-10);
}

TEST_CASE("multiplier bin examples") {
  const Grid g(1, 256);
  const int j = 5;
  const auto s = sample_field([](const RVec& x) { return CVec::Constant(1, std::sin(2 * M_PI * j * x[0])); }, g, 1);
  const auto pos = apply_multiplier(MultiplierSymbol::half_space(1, RVec::Constant(1, 1.0)), s, FullMode{});
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(pos(i, 0) - std::exp(cplx(0, 2 * M_PI * j * g.point(i)[0])) / cplx(0, 2)) < 1e-12);
  const auto cut = apply_multiplier(MultiplierSymbol::identity(1), s, HighpassMode{3 * j, CutoffProfile::raised_cosine()});
  CHECK(lp_norm(cut, 2) < 1e-12);
  const auto band = apply_multiplier(MultiplierSymbol::identity(1), s, BandlimitMode{j / 2.5, CutoffProfile::smooth_step()});
  CHECK(lp_norm(band, 2) < 1e-12);
}
