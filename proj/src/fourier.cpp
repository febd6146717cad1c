#include "mcf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcf {

std::string CutoffProfile::name() const {
  return kind_ == Kind::RaisedCosine ? "raised-cosine" : "smooth-step";
}

double CutoffProfile::operator()(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double s = t - 1.0;
  if (kind_ == Kind::RaisedCosine) {
    const double c = std::cos(0.5 * M_PI * s);
    return c * c;
  }
  // Quintic smoothstep, C^2 at both ends.
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

MultiplierSymbol::MultiplierSymbol(int rows, int cols, Evaluator eval, std::string name)
    : rows_(rows), cols_(cols), eval_(std::move(eval)), name_(std::move(name)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("symbol dimensions must be positive");
}

CMat MultiplierSymbol::operator()(const RVec& xi) const {
  const double r = xi.norm();
  if (!(r > 0)) throw std::invalid_argument("symbol evaluated at xi = 0");
  CMat m = eval_(xi / r);
  if (m.rows() != rows_ || m.cols() != cols_)
    throw std::runtime_error("symbol '" + name_ + "' returned a matrix of the wrong shape");
  return m;
}

MultiplierSymbol MultiplierSymbol::scaled(cplx alpha) const {
  auto inner = eval_;
  return {rows_, cols_, [inner, alpha](const RVec& e) -> CMat { return alpha * inner(e); },
          name_ + "*scaled"};
}

MultiplierSymbol MultiplierSymbol::adjoint() const {
  auto inner = eval_;
  return {cols_, rows_, [inner](const RVec& e) -> CMat { return inner(e).adjoint(); },
          name_ + "^*"};
}

MultiplierSymbol MultiplierSymbol::compose(const MultiplierSymbol& right) const {
  if (cols_ != right.rows_) throw std::invalid_argument("symbol composition shape mismatch");
  auto l = eval_;
  auto r = right.eval_;
  return {rows_, right.cols_, [l, r](const RVec& e) -> CMat { return l(e) * r(e); },
          name_ + "." + right.name_};
}

MultiplierSymbol MultiplierSymbol::identity(int n) {
  return {n, n, [n](const RVec&) -> CMat { return CMat::Identity(n, n); }, "identity"};
}

MultiplierSymbol MultiplierSymbol::scalar(int n, std::function<cplx(const RVec&)> psi,
                                          std::string name) {
  return {n, n, [n, psi](const RVec& e) -> CMat { return psi(e) * CMat::Identity(n, n); },
          std::move(name)};
}

MultiplierSymbol MultiplierSymbol::pair(const CMat& plus, const CMat& minus, std::string name) {
  if (plus.rows() != minus.rows() || plus.cols() != minus.cols())
    throw std::invalid_argument("pair symbol matrices differ in shape");
  return {static_cast<int>(plus.rows()), static_cast<int>(plus.cols()),
          [plus, minus](const RVec& e) -> CMat {
            if (e.size() != 1) throw std::invalid_argument("pair symbols live on the 1-d sphere");
            return e[0] > 0 ? plus : minus;
          },
          std::move(name)};
}

MultiplierSymbol MultiplierSymbol::half_space(int n, const RVec& e) {
  RVec dir = e.normalized();
  return scalar(n, [dir](const RVec& xi) -> cplx { return xi.dot(dir) > 0 ? 1.0 : 0.0; },
                "half-space");
}

MultiplierSymbol MultiplierSymbol::cone_cutoff(int n, const RVec& xi0, double half_angle) {
  if (!(half_angle > 0)) throw std::invalid_argument("cone half-angle must be positive");
  RVec dir = xi0.normalized();
  return scalar(
      n,
      [dir, half_angle](const RVec& xi) -> cplx {
        const double angle = std::acos(std::clamp(xi.dot(dir), -1.0, 1.0));
        if (angle >= half_angle) return 0.0;
        const double c = std::cos(0.5 * M_PI * angle / half_angle);
        return c * c;
      },
      "cone-cutoff");
}

namespace {

double radial_weight(const MultiplierMode& mode, double radius) {
  if (std::holds_alternative<FullMode>(mode)) return radius > 0 ? 1.0 : 0.0;
  if (auto* hp = std::get_if<HighpassMode>(&mode))
    return radius > 0 ? 1.0 - hp->eta.scaled(radius, hp->R) : 0.0;
  const auto& bl = std::get<BandlimitMode>(mode);
  return bl.eta.scaled(radius, bl.R);
}

}  // namespace

SampledField apply_multiplier(const MultiplierSymbol& psi, const SampledField& field,
                              const MultiplierMode& mode) {
  if (psi.cols() != field.components())
    throw std::invalid_argument("symbol and field component counts differ");
  const double nyquist = field.grid().n() / 2.0;
  if (auto* hp = std::get_if<HighpassMode>(&mode); hp && hp->R >= nyquist)
    throw std::invalid_argument("cutoff exceeds grid resolution");
  if (auto* bl = std::get_if<BandlimitMode>(&mode); bl && !(bl->R > 0))
    throw std::invalid_argument("bandlimit radius must be positive");

  const bool one_d = field.grid().dim() == 1;
  CMat plus, minus;
  if (one_d) {
    plus = psi(RVec::Constant(1, 1.0));
    minus = psi(RVec::Constant(1, -1.0));
  }
  const bool bandlimit_zero = std::holds_alternative<BandlimitMode>(mode);
  return apply_lattice_symbol(
      [&](const RVec& k) -> CMat {
        const double r = k.norm();
        const double w = radial_weight(mode, r);
        if (r == 0) {
          // Psi is undefined at the origin; bandlimit keeps the mean unchanged.
          if (bandlimit_zero && psi.rows() == psi.cols()) return CMat::Identity(psi.rows(), psi.cols());
          return CMat::Zero(psi.rows(), psi.cols());
        }
        if (w == 0) return CMat::Zero(psi.rows(), psi.cols());
        if (one_d) return w * (k[0] > 0 ? plus : minus);
        return w * psi(k);
      },
      psi.rows(), field);
}

SampledField apply_lattice_symbol(const std::function<CMat(const RVec& k)>& symbol, int rows,
                                  const SampledField& field) {
  const auto& grid = field.grid();
  const int cols = field.components();
  SpectralField spec = dft(field);
  std::vector<cplx> out(grid.size() * rows);
  CVec u(cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool nonzero = false;
    for (int c = 0; c < cols; ++c) {
      u[c] = spec(i, c);
      nonzero = nonzero || u[c] != cplx(0);
    }
    if (!nonzero) continue;
    CMat m = symbol(grid.frequency(i));
    if (m.rows() != rows || m.cols() != cols)
      throw std::runtime_error("lattice symbol returned a matrix of the wrong shape");
    CVec v = m * u;
    for (int r = 0; r < rows; ++r) out[i * rows + r] = v[r];
  }
  return idft(SpectralField(grid, rows, std::move(out)));
}

}  // namespace mcf
