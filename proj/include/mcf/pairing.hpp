// Empirical evaluation of microlocal pairings
//   I(j,R) = int h(x,u_j) . conj(T_{(1-eta_R)Psi}[u_j]) dx
// and their limits j -> infinity, then R -> infinity.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcf/fourier.hpp"
#include "mcf/synth.hpp"
#include "mcf/testfun.hpp"

namespace mcf {

enum class LimitMode { DoubleLimit, Shortcut };

std::string to_string(LimitMode mode);
LimitMode limit_mode_from_string(const std::string& text);

struct LimitParams {
  Grid grid{1, 4096};
  std::vector<int> j_list{32, 64, 128, 256};
  std::vector<double> R_list{2, 4, 8, 16};
  LimitMode mode = LimitMode::DoubleLimit;
  CutoffProfile eta = CutoffProfile::raised_cosine();
  double tolerance = 1e-2;
};

struct EmpiricalPairing {
  std::vector<int> j_list;
  std::vector<double> R_list;  // empty in shortcut mode
  LimitMode mode = LimitMode::DoubleLimit;
  /// table[jIndex][RIndex]; a single column in shortcut mode.
  std::vector<std::vector<cplx>> table;
  cplx value{0};
  double spread = 0;
  /// Largest |I(j_max,R) - I(j_prev,R)| over R.
  double tail_difference = 0;
  double tolerance = 0;
  bool converged = true;
};

/// Raised when the largest-j difference exceeds ten times the tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EmpiricalPairing diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const EmpiricalPairing& diagnostics() const { return diagnostics_; }

 private:
  EmpiricalPairing diagnostics_;
};

cplx pairing_raw(const TestIntegrand& f, const MultiplierSymbol& psi, const SampledField& u_j,
                 double R, const CutoffProfile& eta);

/// int h(u_j) . conj(T_{(1-eta_R)Psi}[conj(phi) u_j]), the spatial factor moved inside.
cplx pairing_raw_phi_inside(const TestIntegrand& f, const MultiplierSymbol& psi,
                            const SampledField& u_j, double R, const CutoffProfile& eta,
                            const SpatialFn& phi);

/// Checks ordering and Nyquist budgets; throws std::invalid_argument.
void validate_limit_params(const SequenceGenerator& gen, const LimitParams& params);

EmpiricalPairing pairing_limit(const TestIntegrand& f, const MultiplierSymbol& psi,
                               const SequenceGenerator& gen, const LimitParams& params);

/// CSV with columns j, R, re, im (R = inf in shortcut mode).
void write_table_csv(const EmpiricalPairing& pairing, std::ostream& out);

struct SpatialDensity {
  Grid grid;
  std::vector<double> mass;  // per coarse cell

  double total() const;
  double density(std::size_t cell) const { return mass[cell] / grid.cell_volume(); }
  /// Coarse cell containing x; cell c is centered at c/bins on each axis.
  std::size_t cell_of(const RVec& x) const;
};

SpatialDensity lambda_omega(const SequenceGenerator& gen, double p, const LimitParams& params,
                            int bins);

void write_density_csv(const SpatialDensity& density, std::ostream& out);

}  // namespace mcf
