#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mcf/grid.hpp"

using namespace mcf;

namespace {
SampledField random_field(const Grid& g, int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SampledField f(g, N);
  for (auto& v : f.values()) v = cplx(nd(rng), nd(rng));
  return f;
}
}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.cell_volume() == doctest::Approx(1.0 / 64));
  const auto idx = g.multi_index(9);
  CHECK(idx[0] == 1);
  CHECK(idx[1] == 1);
  CHECK(g.point(0)[0] == doctest::Approx(1.0 / 16));
  CHECK(Grid::signed_frequency(4, 8) == 4);
  CHECK(Grid::signed_frequency(5, 8) == -3);
  CHECK_THROWS_AS(Grid(4, 8), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 12), std::invalid_argument);
}

TEST_CASE("non-finite samples are rejected") {
  const Grid g(1, 16);
  CHECK_THROWS_WITH_AS(sample_field([](const RVec& x) {
                         return CVec::Constant(1, x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0);
                       }, g, 1),
                       doctest::Contains("non-finite sample"), std::invalid_argument);
  std::vector<cplx> vals(16, 1.0);
  vals[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SampledField(g, 1, vals), std::invalid_argument);
}

TEST_CASE("dft convention and inverse") {
  const Grid g(1, 32);
  const auto u = sample_field([](const RVec& x) { return CVec::Constant(1, std::exp(cplx(0, 2 * M_PI * 3 * x[0]))); },
                              g, 1);
  const auto c = dft(u);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double expected = Grid::signed_frequency(static_cast<int>(k), 32) == 3 ? 1.0 : 0.0;
    CHECK(std::abs(c(k, 0) - expected) < 1e-12);
  }
  for (int d = 1; d <= 3; ++d) {
    const Grid gd(d, 8);
    const auto f = random_field(gd, 2, 7 + d);
    const auto back = idft(dft(f));
    double err = 0;
    for (std::size_t i = 0; i < f.values().size(); ++i) err = std::max(err, std::abs(back.values()[i] - f.values()[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("Parseval") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g(d, 16);
    const auto f = random_field(g, 3, 100 + d);
    const auto c = dft(f);
    double spec = 0;
    for (auto v : c.coefficients()) spec += std::norm(v);
    CHECK(spec == doctest::Approx(inner(f, f).real()).epsilon(1e-12));
  }
}

TEST_CASE("integration and norms") {
  const Grid g(2, 32);
  const auto u = sample_field([](const RVec& x) { return CVec::Constant(1, x[0] + x[1]); }, g, 1);
  CHECK(integrate(u).real() == doctest::Approx(1.0));
  const auto one = sample_field([](const RVec&) { return CVec::Constant(1, 2.0); }, g, 1);
  CHECK(lp_norm(one, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lp_norm(one, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate(random_field(g, 2, 1)), std::invalid_argument);
}

TEST_CASE("field arithmetic") {
  const Grid g(1, 8);
  auto a = random_field(g, 2, 1);
  const auto b = random_field(g, 2, 2);
  const auto s = a + b;
  const auto diff = s - b;
  for (std::size_t i = 0; i < a.values().size(); ++i) CHECK(std::abs(diff.values()[i] - a.values()[i]) < 1e-14);
  CHECK_THROWS_AS(a += random_field(g, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(a += random_field(Grid(1, 16), 2, 3), std::invalid_argument);
}

TEST_CASE("binary round trip") {
  const auto f = random_field(Grid(2, 8), 3, 42);
  std::stringstream ss;
  write_binary(f, ss);
  const auto g = read_binary(ss);
  CHECK(g.grid() == f.grid());
  CHECK(g.components() == 3);
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(g.values()[i] == f.values()[i]);
  std::stringstream truncated(ss.str().substr(0, 20));
  std::stringstream copy;
  write_binary(f, copy);
  std::stringstream cut(copy.str().substr(0, 40));
  CHECK_THROWS_AS(read_binary(cut), std::runtime_error);
}

TEST_CASE("csv output") {
  const auto f = random_field(Grid(1, 8), 1, 3);
  std::ostringstream os;
  write_csv(f, os);
  const auto text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') >= 8);
}
