#include "doctest.h"
#include "mcf/extract.hpp"
#include "mcf/oracle.hpp"

using namespace mcf;

namespace {
const RVec e1 = RVec::Constant(1, 1.0);
CVec scalar(cplx v) { return CVec::Constant(1, v); }
}  // namespace

TEST_CASE("calibration lands on one half") {
  const auto c = calibrate_direction(LimitParams{});
  CHECK(c.c_dir == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("oscillation oracle for a two-state profile") {
  const auto prof = two_state(scalar(1.0), scalar(0.0), 0.5);
  const auto mcf = oracle_oscillation(prof.atoms, prof.mean, e1, 0.5);
  const cplx v = eval_closed_form(mcf, integrands::identity(2, 1), MultiplierSymbol::identity(1));
  CHECK(v.real() == doctest::Approx(0.25));
}

TEST_CASE("concentration oracle mass equals the integral of w^p") {
  const auto mcf = oracle_concentration(tent_profile(), 1, scalar(1.0), 2.0, 2, 4096);
  const cplx v = eval_closed_form(mcf, integrands::identity(2, 1), MultiplierSymbol::identity(1));
  CHECK(v.real() == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
  const cplx half = eval_closed_form(mcf, integrands::identity(2, 1), MultiplierSymbol::half_space(1, e1));
  CHECK(half.real() == doctest::Approx(1.0 / 12.0).epsilon(1e-4));
}

namespace {
std::vector<MultiplierSymbol> three_symbols() {
  return {MultiplierSymbol::identity(1), MultiplierSymbol::half_space(1, e1),
          MultiplierSymbol::pair(CMat::Constant(1, 1, cplx(1, 1)), CMat::Constant(1, 1, 0.3), "pair")};
}
double rel_err(cplx emp, cplx orc) { return std::abs(emp - orc) / std::abs(orc); }
}  // namespace

TEST_CASE("closed-form action is linear in f and antilinear in Psi") {
  const auto prof = two_state(scalar(1.0), scalar(0.0), 0.5);
  const auto mcf = oracle_oscillation(prof.atoms, prof.mean, e1, 0.5);
  const auto f1 = integrands::soft_identity(1);
  const auto f2 = integrands::quadratic_ratio();
  const cplx a(0.3, -2.0);
  const auto psi = MultiplierSymbol::half_space(1, e1);
  const cplx lhs = eval_closed_form(mcf, f1.scaled(a).plus(f2), psi);
  const cplx rhs = a * eval_closed_form(mcf, f1, psi) + eval_closed_form(mcf, f2, psi);
  CHECK(std::abs(lhs - rhs) < 1e-14);
  CHECK(std::abs(eval_closed_form(mcf, f1, psi.scaled(a)) - std::conj(a) * eval_closed_form(mcf, f1, psi)) < 1e-14);
  ClosedFormMCF empty;
  empty.dim = 1;
  empty.N = 1;
  CHECK(eval_closed_form(empty, f1, psi) == cplx(0));
  cplx total(0);
  for (const auto& atom : mcf.terms[0].atoms) total += atom.weight[0];
  CHECK(std::abs(total) < 1e-15);
}

TEST_CASE("oscillation oracle agrees with the empirical pairing on the battery") {
  const auto prof = two_state(scalar(1.0), scalar(0.0), 0.5);
  const auto gen = oscillation(prof, e1);
  const auto mcf = oracle_oscillation(prof.atoms, prof.mean, e1, 0.5);
  std::vector<TestIntegrand> fs;
  for (const auto& f : test_battery(2, 1, 1, 40))
    if (f.spatially_constant() && fs.size() < 5) fs.push_back(f);
  REQUIRE(fs.size() == 5);
  for (const auto& f : fs)
    for (const auto& psi : three_symbols()) {
      const cplx emp = pairing_limit(f, psi, gen, LimitParams{}).value;
      const cplx orc = eval_closed_form(mcf, f, psi);
      INFO(f.name() << " / " << psi.name() << ": " << emp << " vs " << orc);
      CHECK(rel_err(emp, orc) <= 0.02);
    }
}

TEST_CASE("concentration oracle agrees with the empirical pairing") {
  const auto gen = concentration(tent_profile(), scalar(1.0), 2.0, 1);
  const auto mcf = oracle_concentration(tent_profile(), 1, scalar(1.0), 2.0, 2, 4096);
  LimitParams p;
  // Bounded deviations of h from its recession contribute O(j^{-1/2}), hence the large j.
  p.grid = Grid(1, 1 << 20);
  p.j_list = {1 << 12, 1 << 13, 1 << 14, 1 << 15};
  const std::vector<TestIntegrand> fs = {
      integrands::identity(2, 1), integrands::quadratic_ratio().scaled(cplx(1, 2)),
      integrands::window_at_infinity(2, scalar(1.0), 0.5, scalar(cplx(0.5, -1)))};
  const std::vector<MultiplierSymbol> psis = {MultiplierSymbol::identity(1), MultiplierSymbol::half_space(1, e1)};
  for (const auto& f : fs)
    for (const auto& psi : psis) {
      const cplx emp = pairing_limit(f, psi, gen, p).value;
      const cplx orc = eval_closed_form(mcf, f, psi);
      INFO(f.name() << " / " << psi.name() << ": " << emp << " vs " << orc);
      CHECK(rel_err(emp, orc) <= 0.02);
    }
  // Compactly supported h has no recession part and no finite atoms.
  CHECK(std::abs(eval_closed_form(mcf, integrands::window(2, scalar(0.5), 0.2, scalar(1.0)),
                                  MultiplierSymbol::identity(1))) == 0.0);
  CHECK(mcf.terms.at(0).directions.size() == 2);
}

TEST_CASE("second-order laminate oracle agrees with the empirical pairing") {
  const auto p1 = two_state(scalar(2.0), scalar(0.0), 0.5);
  const auto lam = laminate_mix(oscillation(p1, e1), constant_sequence(scalar(-1.0), 1), 0.5, e1, 8);
  const auto w1 = oracle_oscillation(p1.atoms, p1.mean, e1, 0.5);
  ClosedFormMCF w2;
  w2.dim = 1;
  w2.N = 1;
  const auto mcf = oracle_laminate(w1, w2, p1.atoms, {ZAtom{scalar(-1.0), 1.0}}, p1.mean, scalar(-1.0), 0.5, e1);
  LimitParams p;
  p.grid = Grid(1, 1 << 15);
  p.j_list = {64, 128, 256};
  p.R_list = {2, 4};
  const std::vector<TestIntegrand> fs = {integrands::identity(2, 1), integrands::soft_identity(1),
                                         integrands::quadratic_ratio()};
  for (const auto& f : fs)
    for (const auto& psi : three_symbols()) {
      const cplx emp = pairing_limit(f, psi, lam, p).value;
      const cplx orc = eval_closed_form(mcf, f, psi);
      INFO(f.name() << " / " << psi.name() << ": " << emp << " vs " << orc);
      CHECK(rel_err(emp, orc) <= 0.02);
    }
  // theta -> 1 degenerates to omega1.
  const auto near_one = oracle_laminate(w1, w2, p1.atoms, {ZAtom{scalar(-1.0), 1.0}}, p1.mean, scalar(-1.0),
                                        1 - 1e-9, e1);
  const auto id = integrands::identity(2, 1);
  CHECK(std::abs(eval_closed_form(near_one, id, MultiplierSymbol::identity(1)) -
                 eval_closed_form(w1, id, MultiplierSymbol::identity(1))) < 1e-6);
  CHECK_THROWS_AS(oracle_laminate(oracle_concentration(tent_profile(), 1, scalar(1.0), 2.0, 2, 1024), w2, p1.atoms,
                                  {ZAtom{scalar(-1.0), 1.0}}, p1.mean, scalar(-1.0), 0.5, e1),
                  std::invalid_argument);
}

TEST_CASE("oracle equiintegrability dichotomy and Young consistency") {
  const auto prof = two_state(scalar(1.0), scalar(0.0), 0.5);
  const auto osc = oracle_oscillation(prof.atoms, prof.mean, e1, 0.5);
  for (const auto& term : osc.terms)
    for (const auto& atom : term.atoms) CHECK_FALSE(atom.at_infinity);
  const auto conc = oracle_concentration(tent_profile(), 1, scalar(1.0), 2.0, 2, 4096);
  double prev = 1;
  for (double K : {2.0, 8.0, 32.0}) {
    const cplx v = eval_closed_form(conc, integrands::truncation(2, 1, K), MultiplierSymbol::identity(1));
    CHECK(v.real() == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    prev = v.real();
  }
  CHECK(prev > 0);
  const auto hist = young_measure(oscillation(prof, e1), HistogramMode{}, LimitParams{});
  REQUIRE(hist.atoms.size() == osc.terms[0].atoms.size());
  for (const auto& atom : osc.terms[0].atoms) {
    const double mass = hist.mass_near(atom.location);
    // weight = mass (z - mean)
    CHECK(std::abs(mass * (atom.location - prof.mean)[0] - atom.weight[0]) < 1e-12);
  }
}
