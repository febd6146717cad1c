// Closed-form microlocal compactness forms built from atoms and direction
// quadratures, and the calibration of the directional normalization.
#pragma once

#include <variant>
#include <vector>

#include "json.hpp"
#include "mcf/pairing.hpp"

namespace mcf {

struct LebesgueSpatial {};
struct PointMassSpatial {
  RVec x0;
};
using SpatialMeasure = std::variant<LebesgueSpatial, PointMassSpatial>;

struct OracleAtom {
  CVec location;  // unit vector when at_infinity
  bool at_infinity = false;
  CVec weight;
};

struct OracleDirection {
  RVec xi;
  cplx weight{1.0};
};

struct OracleTerm {
  SpatialMeasure spatial = LebesgueSpatial{};
  std::vector<OracleAtom> atoms;
  std::vector<OracleDirection> directions;
  /// Directional-atom terms are multiplied by the global constant c_dir.
  bool direction_normalized = true;
};

struct ClosedFormMCF {
  int dim = 1;
  int N = 1;
  double c_dir = 0.5;
  std::vector<OracleTerm> terms;

  bool homogeneous() const;
};

/// sum_terms spatial x sum_i sum_k d_k h(z_i) . conj(Psi(xi_k) c_i), with h^infty on infinite atoms.
cplx eval_closed_form(const ClosedFormMCF& mcf, const TestIntegrand& f, const MultiplierSymbol& psi);

ClosedFormMCF oracle_oscillation(const std::vector<ZAtom>& nu, const CVec& Z0, const RVec& n0,
                                 double c_dir);

/// Point mass at 0 carrying h^infty(Z0) and the direction measure from the radial integrals
/// int_0^inf F[w^{p-1}](t eta) conj(F[w](t eta)) t^{d-1} dt.
ClosedFormMCF oracle_concentration(const BumpProfile& w, int dim, const CVec& Z0, double p,
                                   int sphere_quadrature, int radial_quadrature);

ClosedFormMCF oracle_laminate(const ClosedFormMCF& omega1, const ClosedFormMCF& omega2,
                              const std::vector<ZAtom>& nu1, const std::vector<ZAtom>& nu2,
                              const CVec& A, const CVec& B, double theta, const RVec& n0);

struct Calibration {
  double c_dir;
  double empirical;
  double uncalibrated_oracle;
};

/// Fits c_dir on the sine oscillation with f = z.q and Psi = 1; fails unless near 1/2 or 1.
Calibration calibrate_direction(const LimitParams& params);

nlohmann::json to_json(const ClosedFormMCF& mcf);

}  // namespace mcf
