#include "mcf/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mcf/format.hpp"

namespace mcf {

std::string to_string(LimitMode mode) {
  return mode == LimitMode::DoubleLimit ? "double-limit" : "shortcut";
}

LimitMode limit_mode_from_string(const std::string& text) {
  if (text == "double-limit") return LimitMode::DoubleLimit;
  if (text == "shortcut") return LimitMode::Shortcut;
  throw std::invalid_argument("unknown limit mode '" + text + "'");
}

namespace {

void require_shapes(const TestIntegrand& f, const MultiplierSymbol& psi, int field_components) {
  if (f.N() != psi.rows() || psi.cols() != field_components)
    throw std::invalid_argument("dimension mismatch between integrand, symbol and field");
}

SampledField integrand_field(const TestIntegrand& f, const SampledField& u) {
  const auto& grid = u.grid();
  SampledField out(grid, f.N());
  const bool constant = f.spatially_constant();
  const RVec none;
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.set(i, constant ? f.h(u.at(i)) : f.eval(grid.point(i), u.at(i)));
  return out;
}

// Per nonzero lattice frequency: |k| and Hhat_k . conj(Psi(k/|k|) vhat_k).
struct Contributions {
  std::vector<double> radius;
  std::vector<cplx> value;

  cplx weighted(const std::function<double(double)>& w) const {
    cplx sum = 0;
    for (std::size_t i = 0; i < radius.size(); ++i) sum += w(radius[i]) * value[i];
    return sum;
  }
};

Contributions spectral_contributions(const SampledField& H, const SampledField& v,
                                     const MultiplierSymbol& psi) {
  const auto& grid = H.grid();
  const SpectralField Hh = dft(H);
  const SpectralField vh = dft(v);
  const int rows = psi.rows();
  const int cols = psi.cols();
  const bool one_d = grid.dim() == 1;
  CMat plus, minus;
  if (one_d) {
    plus = psi(RVec::Constant(1, 1.0));
    minus = psi(RVec::Constant(1, -1.0));
  }
  Contributions out;
  CVec u(cols);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    bool nonzero = false;
    for (int c = 0; c < cols; ++c) {
      u[c] = vh(i, c);
      nonzero = nonzero || u[c] != cplx(0);
    }
    if (!nonzero) continue;
    const RVec k = grid.frequency(i);
    CVec t = one_d ? CVec((k[0] > 0 ? plus : minus) * u) : CVec(psi(k) * u);
    cplx s = 0;
    for (int r = 0; r < rows; ++r) s += Hh(i, r) * std::conj(t[r]);
    out.radius.push_back(k.norm());
    out.value.push_back(s);
  }
  return out;
}

}  // namespace

cplx pairing_raw(const TestIntegrand& f, const MultiplierSymbol& psi, const SampledField& u_j,
                 double R, const CutoffProfile& eta) {
  require_shapes(f, psi, u_j.components());
  if (R >= u_j.grid().n() / 4.0) throw std::invalid_argument("cutoff exceeds grid resolution");
  const SampledField H = integrand_field(f, u_j);
  const SampledField T = apply_multiplier(psi, u_j, HighpassMode{R, eta});
  return inner(H, T);
}

cplx pairing_raw_phi_inside(const TestIntegrand& f, const MultiplierSymbol& psi,
                            const SampledField& u_j, double R, const CutoffProfile& eta,
                            const SpatialFn& phi) {
  require_shapes(f, psi, u_j.components());
  if (R >= u_j.grid().n() / 4.0) throw std::invalid_argument("cutoff exceeds grid resolution");
  const SampledField H = integrand_field(f, u_j);
  SampledField moved = u_j;
  for (std::size_t i = 0; i < u_j.points(); ++i)
    moved.set(i, std::conj(phi(u_j.grid().point(i))) * u_j.at(i));
  return inner(H, apply_multiplier(psi, moved, HighpassMode{R, eta}));
}

void validate_limit_params(const SequenceGenerator& gen, const LimitParams& params) {
  const auto& j = params.j_list;
  const auto& R = params.R_list;
  if (gen.dim() != params.grid.dim())
    throw std::invalid_argument("generator and grid dimensions differ");
  if (j.size() < 2) throw std::invalid_argument("j_list needs at least two entries");
  if (!std::is_sorted(j.begin(), j.end()) || std::adjacent_find(j.begin(), j.end()) != j.end())
    throw std::invalid_argument("j_list must be strictly increasing");
  if (j.front() < 1) throw std::invalid_argument("j_list entries must be positive");
  const double budget = params.grid.n() / 8.0;
  if (gen.highest_frequency(j.back()) > budget)
    throw std::invalid_argument("largest j exceeds the Nyquist/4 budget for this generator");
  if (!(params.tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (params.mode == LimitMode::Shortcut) return;
  if (R.empty()) throw std::invalid_argument("R_list must not be empty");
  if (!std::is_sorted(R.begin(), R.end()) || std::adjacent_find(R.begin(), R.end()) != R.end())
    throw std::invalid_argument("R_list must be strictly increasing");
  if (R.front() < 1.0) throw std::invalid_argument("cutoff radii must be at least 1");
  if (R.back() >= params.grid.n() / 4.0) throw std::invalid_argument("cutoff exceeds grid resolution");
  const double low = gen.lowest_frequency(j.front());
  if (R.back() > j.front() / 2.0 || (low > 0 && R.back() > low / 2.0))
    throw std::invalid_argument("largest R must not exceed half the smallest active frequency");
}

EmpiricalPairing pairing_limit(const TestIntegrand& f, const MultiplierSymbol& psi,
                               const SequenceGenerator& gen, const LimitParams& params) {
  validate_limit_params(gen, params);
  require_shapes(f, psi, gen.N());
  EmpiricalPairing out;
  out.j_list = params.j_list;
  out.mode = params.mode;
  out.tolerance = params.tolerance;
  const auto& grid = params.grid;

  std::optional<SampledField> limit;
  if (params.mode == LimitMode::Shortcut) limit = gen.weak_limit(grid);

  for (int j : params.j_list) {
    SampledField u = gen.emit(j, grid);
    const SampledField H = integrand_field(f, u);
    if (limit) u -= *limit;
    const Contributions c = spectral_contributions(H, u, psi);
    std::vector<cplx> row;
    if (params.mode == LimitMode::Shortcut) {
      row.push_back(c.weighted([](double) { return 1.0; }));
    } else {
      for (double R : params.R_list)
        row.push_back(c.weighted([&](double r) { return 1.0 - params.eta.scaled(r, R); }));
    }
    out.table.push_back(std::move(row));
  }

  const auto& last = out.table.back();
  const auto& prev = out.table[out.table.size() - 2];
  for (std::size_t r = 0; r < last.size(); ++r)
    out.tail_difference = std::max(out.tail_difference, std::abs(last[r] - prev[r]));

  if (params.mode == LimitMode::Shortcut) {
    out.value = 0.5 * (last[0] + prev[0]);
    out.spread = 0.5 * std::abs(last[0] - prev[0]);
  } else {
    out.R_list = params.R_list;
    const std::size_t first = last.size() / 2;
    cplx sum = 0;
    for (std::size_t r = first; r < last.size(); ++r) sum += last[r];
    out.value = sum / double(last.size() - first);
    for (auto v : last) out.spread = std::max(out.spread, std::abs(v - out.value));
  }
  out.converged = out.tail_difference <= params.tolerance;
  if (out.tail_difference > 10 * params.tolerance) {
    std::ostringstream os;
    os << "pairing did not stabilise in j: tail difference " << format_real(out.tail_difference)
       << " exceeds 10x tolerance " << format_real(params.tolerance) << "; table:\n";
    write_table_csv(out, os);
    throw ConvergenceError(os.str(), out);
  }
  return out;
}

void write_table_csv(const EmpiricalPairing& pairing, std::ostream& out) {
  out << "j,R,re,im\n";
  for (std::size_t a = 0; a < pairing.table.size(); ++a)
    for (std::size_t b = 0; b < pairing.table[a].size(); ++b) {
      const cplx v = pairing.table[a][b];
      out << pairing.j_list[a] << ','
          << (pairing.R_list.empty() ? std::string("inf") : format_real(pairing.R_list[b])) << ','
          << format_real(v.real()) << ',' << format_real(v.imag()) << '\n';
    }
}

double SpatialDensity::total() const {
  double s = 0;
  for (double m : mass) s += m;
  return s;
}

std::size_t SpatialDensity::cell_of(const RVec& x) const {
  const int bins = grid.n();
  std::size_t flat = 0;
  for (int a = 0; a < grid.dim(); ++a) {
    long b = static_cast<long>(std::floor(x[a] * bins + 0.5));
    b = ((b % bins) + bins) % bins;
    flat = flat * bins + static_cast<std::size_t>(b);
  }
  return flat;
}

SpatialDensity lambda_omega(const SequenceGenerator& gen, double p, const LimitParams& params,
                            int bins) {
  validate_limit_params(gen, params);
  if (!(p > 1.0)) throw std::invalid_argument("lambda_omega needs p > 1");
  const Grid coarse(gen.dim(), bins);
  auto binned = [&](int j) {
    SpatialDensity d{coarse, std::vector<double>(coarse.size(), 0.0)};
    const SampledField u = gen.emit(j, params.grid);
    const double vol = params.grid.cell_volume();
    for (std::size_t i = 0; i < u.points(); ++i)
      d.mass[d.cell_of(params.grid.point(i))] += std::pow(u.at(i).norm(), p) * vol;
    return d;
  };
  const auto& j = params.j_list;
  SpatialDensity top = binned(j.back());
  const SpatialDensity prev = binned(j[j.size() - 2]);
  double diff = 0;
  for (std::size_t c = 0; c < top.mass.size(); ++c)
    diff = std::max(diff, std::abs(top.mass[c] - prev.mass[c]));
  if (diff > params.tolerance * std::max(1.0, top.total()))
    throw std::runtime_error("lambda_omega unstable across the two largest j: max bin change " +
                             format_real(diff));
  return top;
}

void write_density_csv(const SpatialDensity& density, std::ostream& out) {
  const auto& g = density.grid;
  static const char* coords[] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) out << coords[a] << "_center,";
  out << "mass,density\n";
  for (std::size_t c = 0; c < density.mass.size(); ++c) {
    auto idx = g.multi_index(c);
    for (int a = 0; a < g.dim(); ++a) out << format_real(double(idx[a]) / g.n()) << ',';
    out << format_real(density.mass[c]) << ',' << format_real(density.density(c)) << '\n';
  }
}

}  // namespace mcf
