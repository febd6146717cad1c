#include "mcf/extract.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mcf/format.hpp"

namespace mcf {

double AtomicYoungMeasure::mass_near(const CVec& z) const {
  if (atoms.empty()) throw std::invalid_argument("empty Young measure");
  const ZAtom* best = &atoms.front();
  for (const auto& a : atoms)
    if ((a.z - z).norm() < (best->z - z).norm()) best = &a;
  return best->mass;
}

namespace {

constexpr int kMaxClusters = 16;

bool lexicographic_less(const CVec& a, const CVec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

AtomicYoungMeasure histogram(const SequenceGenerator& gen, const LimitParams& params) {
  const SampledField u = gen.emit(params.j_list.back(), params.grid);
  double scale = 0;
  for (std::size_t i = 0; i < u.points(); ++i) scale = std::max(scale, u.at(i).norm());
  const double radius = 1e-8 * (1.0 + scale);
  std::vector<CVec> centers;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < u.points(); ++i) {
    const CVec z = u.at(i);
    std::size_t c = 0;
    while (c < centers.size() && (centers[c] - z).norm() > radius) ++c;
    if (c == centers.size()) {
      if (centers.size() == kMaxClusters) throw std::runtime_error("not atomically clusterable");
      centers.push_back(z);
      counts.push_back(0);
    }
    ++counts[c];
  }
  AtomicYoungMeasure out;
  for (std::size_t c = 0; c < centers.size(); ++c)
    out.atoms.push_back({centers[c], double(counts[c]) / double(u.points())});
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const ZAtom& a, const ZAtom& b) { return lexicographic_less(a.z, b.z); });
  return out;
}

double smooth_cutoff(double t, double eps) {
  if (t <= eps) return 1.0;
  if (t >= 2 * eps) return 0.0;
  const double s = (2 * eps - t) / eps;
  return s * s * (3 - 2 * s);
}

AtomicYoungMeasure from_mcf(const SequenceGenerator& gen, const FromMcfMode& mode,
                            const LimitParams& params) {
  if (!gen.constant_limit()) throw std::invalid_argument("from-mcf reconstruction needs a constant weak limit");
  const auto& atoms = mode.atoms;
  if (atoms.empty()) throw std::invalid_argument("from-mcf reconstruction needs atom locations");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::size_t b = a + 1; b < atoms.size(); ++b) gap = std::min(gap, (atoms[a] - atoms[b]).norm());
  if (!std::isfinite(gap)) gap = 1.0;
  if (!(mode.epsilon > 0 && mode.epsilon < gap / 4))
    throw std::invalid_argument("epsilon must lie in (0, atom gap / 4)");

  const CVec u = *gen.constant_limit();
  const int N = gen.N();
  const double p = gen.p();
  const double r = gap / 2;
  const auto psi = MultiplierSymbol::identity(N);
  const VerticalFn zero_rec = [N](const CVec&) -> CVec { return CVec::Zero(N); };
  const std::size_t count = atoms.size();

  // Bumps F_a equal 1 at z_a and vanish at the other atoms.
  auto bump = [r](const CVec& center, const CVec& z) { return std::max(0.0, 1.0 - (z - center).norm() / r); };
  auto away_from_u = [u, eps = mode.epsilon](const CVec& z) -> CVec {
    const CVec d = z - u;
    const double t = d.norm();
    const double w = 1.0 - smooth_cutoff(t, eps);
    return w > 0 ? CVec(w * d / (t * t)) : CVec::Zero(d.size());
  };

  Eigen::VectorXd rhs(count);
  Eigen::MatrixXd M(count, count);
  for (std::size_t a = 0; a < count; ++a) {
    const CVec za = atoms[a];
    const double Fu = bump(za, u);
    const TestIntegrand h_eps(
        p, N, [=](const CVec& z) -> CVec { return bump(za, z) * away_from_u(z); }, zero_rec, "h_eps");
    cplx value = Fu + pairing_limit(h_eps, psi, gen, params).value;
    if (Fu != 0) {
      const TestIntegrand k_eps(p, N, [=](const CVec& z) -> CVec { return Fu * away_from_u(z); }, zero_rec,
                                "k_eps");
      value -= pairing_limit(k_eps, psi, gen, params).value;
    }
    rhs[a] = value.real();
    for (std::size_t b = 0; b < count; ++b) M(a, b) = bump(za, atoms[b]);
  }
  const Eigen::VectorXd m = M.colPivHouseholderQr().solve(rhs);

  AtomicYoungMeasure out;
  out.raw_total = m.sum();
  double kept = 0;
  for (std::size_t a = 0; a < count; ++a) kept += std::max(0.0, m[a]);
  if (!(kept > 0)) throw std::runtime_error("from-mcf reconstruction produced no positive mass");
  for (std::size_t a = 0; a < count; ++a) out.atoms.push_back({atoms[a], std::max(0.0, m[a]) / kept});
  return out;
}

}  // namespace

AtomicYoungMeasure young_measure(const SequenceGenerator& gen, const YoungMode& mode,
                                 const LimitParams& params) {
  if (params.j_list.empty()) throw std::invalid_argument("j_list must not be empty");
  if (std::holds_alternative<HistogramMode>(mode)) return histogram(gen, params);
  return from_mcf(gen, std::get<FromMcfMode>(mode), params);
}

HMeasureValue hmeasure_pair(const SpatialFn& phi1, const SpatialFn& phi2, const MultiplierSymbol& psi,
                            const SequenceGenerator& gen, const LimitParams& params) {
  if (gen.p() != 2.0) throw std::invalid_argument("H-measures are defined for p = 2");
  const int N = gen.N();
  const bool scalar_psi = psi.rows() == 1 && psi.cols() == 1;
  if (!scalar_psi && (psi.rows() != N || psi.cols() != N))
    throw std::invalid_argument("H-measure symbol must be 1x1 or N x N");
  if (params.j_list.size() < 2) throw std::invalid_argument("j_list needs at least two entries");
  const Grid& grid = params.grid;
  const SampledField limit = gen.weak_limit(grid);

  auto localized = [&](const SampledField& v, const SpatialFn& phi) {
    SampledField out = v;
    if (phi)
      for (std::size_t i = 0; i < v.points(); ++i) out.set(i, phi(grid.point(i)) * v.at(i));
    return dft(out);
  };

  HMeasureValue out;
  for (int j : params.j_list) {
    const SampledField v = gen.emit(j, grid) - limit;
    const SpectralField a = localized(v, phi1);
    const SpectralField b = localized(v, phi2);
    cplx sum = 0;
    CVec bk(N);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      for (int c = 0; c < N; ++c) bk[c] = b(i, c);
      const RVec k = grid.frequency(i);
      const CMat s = psi(k);
      const CVec t = scalar_psi ? CVec(s(0, 0) * bk) : CVec(s * bk);
      for (int c = 0; c < N; ++c) sum += a(i, c) * std::conj(t[c]);
    }
    out.per_j.push_back(sum);
  }
  const cplx last = out.per_j.back();
  const cplx prev = out.per_j[out.per_j.size() - 2];
  out.value = 0.5 * (last + prev);
  out.spread = 0.5 * std::abs(last - prev);
  return out;
}

EquiintResult equiint_indicator(const SequenceGenerator& gen, const std::vector<double>& K_list,
                                const LimitParams& params) {
  if (K_list.size() < 2 || !std::is_sorted(K_list.begin(), K_list.end()) ||
      std::adjacent_find(K_list.begin(), K_list.end()) != K_list.end())
    throw std::invalid_argument("K_list must be strictly increasing with at least two entries");
  EquiintResult out;
  out.K_list = K_list;
  const auto psi = MultiplierSymbol::identity(gen.N());
  for (double K : K_list)
    out.per_K.push_back(
        std::abs(pairing_limit(integrands::truncation(gen.p(), gen.N(), K), psi, gen, params).value));
  out.value = out.per_K.back();
  const double change = std::abs(out.per_K.back() - out.per_K[out.per_K.size() - 2]);
  out.stable = change <= params.tolerance;
  if (!out.stable)
    throw std::runtime_error("equiintegrability indicator unstable in K: last two values " +
                             format_real(out.per_K[out.per_K.size() - 2]) + ", " +
                             format_real(out.per_K.back()));
  return out;
}

std::string ZTarget::label() const {
  std::ostringstream os;
  os << (at_infinity ? "inf(" : "z(");
  for (int i = 0; i < z.size(); ++i) {
    if (i) os << ';';
    os << format_real(z[i].real());
    if (z[i].imag() != 0) os << (z[i].imag() > 0 ? "+" : "") << format_real(z[i].imag()) << 'i';
  }
  os << ')';
  return os.str();
}

SpatialFn spatial_bump(const RVec& x0, double width) {
  if (!(width > 0 && width <= 0.5)) throw std::invalid_argument("bump width must lie in (0, 1/2]");
  return [x0, width](const RVec& x) -> cplx {
    double r2 = 0;
    for (int a = 0; a < x.size(); ++a) {
      double d = x[a] - x0[a];
      d -= std::round(d);
      r2 += d * d;
    }
    const double r = std::sqrt(r2);
    if (r >= width) return 0.0;
    const double c = std::cos(0.5 * M_PI * r / width);
    return c * c;
  };
}

WavefrontSample wavefront_indicator(const SequenceGenerator& gen, const RVec& x0, const ZTarget& z0,
                                    const RVec& xi0, const WavefrontWidths& widths,
                                    const LimitParams& params) {
  if (!(widths.x_width > 0 && widths.z_width > 0 && widths.cone_half_angle > 0))
    throw std::invalid_argument("wavefront widths must be positive");
  if (x0.size() != gen.dim() || xi0.size() != gen.dim() || z0.z.size() != gen.N())
    throw std::invalid_argument("wavefront sample dimensions differ from the sequence");
  const int N = gen.N();
  const SpatialFn phi = spatial_bump(x0, widths.x_width);
  const auto psi = MultiplierSymbol::cone_cutoff(N, xi0, widths.cone_half_angle);
  double sum = 0;
  for (int c = 0; c < N; ++c) {
    const CVec v = CVec::Unit(N, c);
    const TestIntegrand g = z0.at_infinity ? integrands::window_at_infinity(gen.p(), z0.z, widths.z_width, v)
                                           : integrands::window(gen.p(), z0.z, widths.z_width, v);
    sum += std::norm(pairing_limit(g.times(phi, "bump"), psi, gen, params).value);
  }
  return {x0, z0, xi0.normalized(), std::sqrt(sum)};
}

WavefrontScan wavefront_scan(const SequenceGenerator& gen, const std::vector<RVec>& x_points,
                             const std::vector<ZTarget>& z_points, const std::vector<RVec>& directions,
                             const WavefrontWidths& widths, const LimitParams& params) {
  WavefrontScan scan;
  for (const auto& x : x_points)
    for (const auto& z : z_points)
      for (const auto& xi : directions) {
        scan.samples.push_back(wavefront_indicator(gen, x, z, xi, widths, params));
        scan.max_indicator = std::max(scan.max_indicator, scan.samples.back().indicator);
      }
  scan.threshold = 0.1 * scan.max_indicator;
  for (const auto& s : scan.samples) scan.above.push_back(scan.max_indicator > 0 && s.indicator >= scan.threshold);
  return scan;
}

void write_wavefront_csv(const WavefrontScan& scan, std::ostream& out) {
  static const char* axes[] = {"x0", "y0", "z0"};
  const int d = scan.samples.empty() ? 1 : static_cast<int>(scan.samples.front().x0.size());
  for (int a = 0; a < d; ++a) out << axes[a] << ',';
  out << "z_label,xi_angle,indicator,above_threshold\n";
  for (std::size_t i = 0; i < scan.samples.size(); ++i) {
    const auto& s = scan.samples[i];
    for (int a = 0; a < d; ++a) out << format_real(s.x0[a]) << ',';
    const double angle = d == 1 ? (s.xi0[0] > 0 ? 0.0 : M_PI) : std::atan2(s.xi0[1], s.xi0[0]);
    out << s.z0.label() << ',' << format_real(angle) << ',' << format_real(s.indicator) << ','
        << (scan.above[i] ? 1 : 0) << '\n';
  }
}

}  // namespace mcf
