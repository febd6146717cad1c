// Fourier multipliers with 0-homogeneous matrix symbols and radial cutoffs.
#pragma once

#include <functional>
#include <string>
#include <variant>

#include "mcf/grid.hpp"

namespace mcf {

/// Radial profile eta with eta = 1 on [0,1] and eta = 0 on [2, inf).
class CutoffProfile {
 public:
  enum class Kind { RaisedCosine, SmoothStep };

  explicit CutoffProfile(Kind kind = Kind::RaisedCosine) : kind_(kind) {}

  static CutoffProfile raised_cosine() { return CutoffProfile(Kind::RaisedCosine); }
  static CutoffProfile smooth_step() { return CutoffProfile(Kind::SmoothStep); }

  Kind kind() const { return kind_; }
  std::string name() const;
  double operator()(double t) const;
  /// eta_R(|xi|) = eta(|xi| / R).
  double scaled(double radius, double R) const { return (*this)(radius / R); }

 private:
  Kind kind_;
};

/// Symbol Psi on the unit sphere with values in C^{rows x cols}.
class MultiplierSymbol {
 public:
  using Evaluator = std::function<CMat(const RVec& unit_xi)>;

  MultiplierSymbol(int rows, int cols, Evaluator eval, std::string name);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::string& name() const { return name_; }

  /// Evaluates at xi / |xi|; xi must be nonzero.
  CMat operator()(const RVec& xi) const;

  MultiplierSymbol scaled(cplx alpha) const;
  MultiplierSymbol adjoint() const;
  /// Pointwise product (*this)(xi) * right(xi).
  MultiplierSymbol compose(const MultiplierSymbol& right) const;

  static MultiplierSymbol identity(int n);
  static MultiplierSymbol scalar(int n, std::function<cplx(const RVec&)> psi, std::string name);
  /// d=1 symbols are a pair of matrices (Psi(+1), Psi(-1)).
  static MultiplierSymbol pair(const CMat& plus, const CMat& minus, std::string name);
  /// 1 on the open half-space xi.e > 0, 0 elsewhere.
  static MultiplierSymbol half_space(int n, const RVec& e);
  /// cos^2 bump of the angle to xi0, vanishing beyond half_angle.
  static MultiplierSymbol cone_cutoff(int n, const RVec& xi0, double half_angle);

 private:
  int rows_;
  int cols_;
  Evaluator eval_;
  std::string name_;
};

struct FullMode {};
struct HighpassMode {
  double R;
  CutoffProfile eta;
};
struct BandlimitMode {
  double R;
  CutoffProfile eta;
};
using MultiplierMode = std::variant<FullMode, HighpassMode, BandlimitMode>;

/// T_Psi with the chosen radial weight; the zero bin is dropped except in bandlimit mode.
SampledField apply_multiplier(const MultiplierSymbol& psi, const SampledField& field,
                              const MultiplierMode& mode);

/// Applies an arbitrary lattice symbol k -> C^{rows x cols} (k in integer frequencies).
SampledField apply_lattice_symbol(const std::function<CMat(const RVec& k)>& symbol, int rows,
                                  const SampledField& field);

}  // namespace mcf
