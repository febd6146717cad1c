// Relaxation of anisotropic gradient functionals and transport of
// oscillations in semilinear first-order systems.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcf/constraint.hpp"
#include "mcf/extract.hpp"

namespace mcf {

/// f(A) = |A|^2 - n0^T A^T A n0 written as h(A) : A with h(A) = A (I - n0 n0^T).
TestIntegrand anisotropy_integrand(int m, const RVec& n0);
double anisotropy_energy(const RMat& A, const RVec& n0);
/// Unflattens a row-major m x d matrix.
RMat unvec(const CVec& v, int m, int d);

struct RelaxationReport {
  double value = 0;
  /// int <h(z) : conj(grad u), nu>.
  double young_part = 0;
  /// <<f (x) I, omega>> minus its part carried by large values.
  double finite_part = 0;
  /// Truncated pairing at the largest K: the concentration share.
  double infinite_part = 0;
  double spread = 0;
  /// int f(u_j) at the largest j, computed directly.
  double direct_value = 0;
  /// Pairing mass of u_j - u per direction of a sphere grid (cone cutoffs).
  std::vector<RVec> directions;
  std::vector<double> cone_masses;
  double curl_residual = 0;
  std::vector<std::string> warnings;
};

RelaxationReport relaxed_functional(const TestIntegrand& f, const AtomicYoungMeasure& nu,
                                    const SampledField& gradu, const SequenceGenerator& gen,
                                    const LimitParams& params, const std::vector<double>& K_list = {4, 8},
                                    int cone_directions = 16);

using MatrixIntegrand = std::function<double(const RMat&)>;

struct LaminationGrid {
  std::vector<RVec> directions;  // n
  std::vector<RVec> amplitudes;  // c
  std::vector<double> thetas;    // in (0,1)
};

/// depth passes of min over (c, n, theta) of theta g(A + (1-theta) c(x)n) + (1-theta) g(A - theta c(x)n).
double qc_envelope_lamination(const MatrixIntegrand& g, const RMat& A, int depth, const LaminationGrid& grid);

struct TransportRun {
  double speed = 1.0;
  /// Semilinearity g(u) = lambda u; none for pure transport.
  std::optional<double> lambda;
  /// Growth constant C of |g(z)| <= C(1 + |z|); solutions growing beyond e^{2CT} abort.
  double growth_constant = 1.0;
  double dt = 0;  // 0 selects 1/(8 max frequency)
  std::vector<double> times;
  std::vector<SampledField> snapshots;
};

/// du/dt - a du/dx = g(u) on the 1-d torus: spectral shift for the transport part, integrating-factor
/// midpoint steps for g. Snapshots are stored at `sample_times`.
void transport_solve(TransportRun& run, const SampledField& u0, double T,
                     const std::vector<double>& sample_times);

/// Pairs (u_j, g(u_j)) on the (t, x) torus: u_j = e^{lambda t} u0_j(x + speed t), exact solutions.
/// u0_j must have x-frequencies within j +- bandwidth and weak limit 0.
SequenceGenerator transport_sequence(std::function<cplx(int j, double x)> u0, int bandwidth, double speed,
                                     std::optional<double> lambda, std::string name);

struct SpaceTimeTest {
  SpatialFn phi;
  SpatialFn dphi_dt;
  SpatialFn dphi_dx;
};

/// sin^2(pi t)(1 + cos(2 pi x)/2).
SpaceTimeTest standard_space_time_bump();

struct ExtendedSystemResult {
  cplx lhs;
  cplx rhs;
  double residual;
  /// |LHS + RHS| per j at the largest R.
  std::vector<double> per_j;
  std::vector<int> j_list;
};

/// |<<(d_t phi - A^* phi) h(z1).q1, omega>> + <<phi [Dh(z1) z2 . q1 + h(z1) . q2], omega>>| on the
/// (t, x) torus with one space dimension, A = A_x d_x. Fails unless A_x^* Dh(z) = Dh(z) A_x at
/// sampled z.
ExtendedSystemResult extended_system_residual(const SequenceGenerator& gen, const SpaceTimeTest& phi,
                                              const VerticalFn& h, const std::function<CMat(const CVec&)>& Dh,
                                              const MultiplierSymbol& psi, const RMat& A_x,
                                              const LimitParams& params);

nlohmann::json to_json(const RelaxationReport& report);
nlohmann::json to_json(const TransportRun& run);

}  // namespace mcf
