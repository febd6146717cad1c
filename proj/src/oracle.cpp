#include "mcf/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace mcf {

bool ClosedFormMCF::homogeneous() const {
  for (const auto& t : terms)
    if (!std::holds_alternative<LebesgueSpatial>(t.spatial)) return false;
  return true;
}

namespace {

// Torus average of phi by a 64^d midpoint rule (exact for low-order trigonometric phi).
cplx torus_integral(const SpatialFn& phi, int dim) {
  if (!phi) return 1.0;
  const Grid g(dim, 64);
  cplx sum = 0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += phi(g.point(i));
  return sum * g.cell_volume();
}

}  // namespace

cplx eval_closed_form(const ClosedFormMCF& mcf, const TestIntegrand& f, const MultiplierSymbol& psi) {
  if (f.N() != mcf.N || psi.rows() != mcf.N || psi.cols() != mcf.N)
    throw std::invalid_argument("closed-form MCF and integrand/symbol dimensions differ");
  cplx total = 0;
  for (const auto& term : mcf.terms) {
    // Symbol-applied weights are shared by all integrand terms.
    std::vector<std::vector<CVec>> psi_c(term.atoms.size());
    for (std::size_t i = 0; i < term.atoms.size(); ++i)
      for (const auto& d : term.directions) psi_c[i].push_back(psi(d.xi) * term.atoms[i].weight);

    cplx term_sum = 0;
    for (const auto& it : f.terms()) {
      cplx spatial;
      if (std::holds_alternative<LebesgueSpatial>(term.spatial)) {
        spatial = torus_integral(it.phi, mcf.dim);
      } else {
        const RVec& x0 = std::get<PointMassSpatial>(term.spatial).x0;
        spatial = it.phi ? it.phi(x0) : cplx(1.0);
      }
      if (spatial == cplx(0)) continue;
      cplx atoms_sum = 0;
      for (std::size_t i = 0; i < term.atoms.size(); ++i) {
        const auto& a = term.atoms[i];
        CVec hv;
        if (a.at_infinity) {
          if (!it.recession)
            throw std::invalid_argument("integrand '" + f.name() + "' lacks recession data");
          hv = (*it.recession)(a.location);
        } else {
          hv = it.h(a.location);
        }
        for (std::size_t k = 0; k < term.directions.size(); ++k)
          atoms_sum += term.directions[k].weight * std::conj(hv.dot(psi_c[i][k]));
      }
      term_sum += spatial * atoms_sum;
    }
    total += (term.direction_normalized ? mcf.c_dir : 1.0) * term_sum;
  }
  return total;
}

ClosedFormMCF oracle_oscillation(const std::vector<ZAtom>& nu, const CVec& Z0, const RVec& n0,
                                 double c_dir) {
  double mass = 0;
  for (const auto& a : nu) {
    if (a.mass < 0) throw std::invalid_argument("Young measure masses must be nonnegative");
    mass += a.mass;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("Young measure masses must sum to 1");
  ClosedFormMCF mcf;
  mcf.dim = static_cast<int>(n0.size());
  mcf.N = static_cast<int>(Z0.size());
  mcf.c_dir = c_dir;
  OracleTerm t;
  for (const auto& a : nu) t.atoms.push_back({a.z, false, a.mass * (a.z - Z0)});
  const RVec e = n0.normalized();
  t.directions = {{e, 1.0}, {-e, 1.0}};
  mcf.terms.push_back(std::move(t));
  return mcf;
}

namespace {

// Direction weights for d = 1 from box transforms with padding factor P.
std::array<cplx, 2> concentration_weights_1d(const BumpProfile& w, double p, int n, int P) {
  const Grid g(1, n * P);
  // Box [-P/2, P/2) mapped to the unit torus.
  auto Wf = sample_field(
      [&](const RVec& x) { return CVec::Constant(1, w.w(RVec::Constant(1, P * (x[0] - 0.5)))); }, g,
      1);
  auto Ff = sample_field(
      [&](const RVec& x) {
        return CVec::Constant(1, std::pow(w.w(RVec::Constant(1, P * (x[0] - 0.5))), p - 1.0));
      },
      g, 1);
  const auto Wh = dft(Wf);
  const auto Fh = dft(Ff);
  std::array<cplx, 2> d{0.0, 0.0};  // +1, -1
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int k = Grid::signed_frequency(static_cast<int>(i), g.n());
    // Continuous transforms at t = k/P are P * c_k; trapezoid step 1/P.
    const cplx term = double(P) * Fh(i, 0) * std::conj(Wh(i, 0));
    if (k == 0 || 2 * k == g.n()) {
      d[0] += 0.5 * term;
      d[1] += 0.5 * term;
    } else {
      d[k > 0 ? 0 : 1] += term;
    }
  }
  return d;
}

// Direction weights for d = 2 by direct transform sums on an m x m sample grid of the support box.
std::vector<cplx> concentration_weights_2d(const BumpProfile& w, double p, int angles, int radial,
                                           int m) {
  const double box = 2.0 * w.support_radius;
  const double h = box / m;
  std::vector<RVec> ys;
  std::vector<double> wv, fv;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      RVec y(2);
      y << -w.support_radius + (a + 0.5) * h, -w.support_radius + (b + 0.5) * h;
      const double v = w.w(y);
      if (v == 0) continue;
      ys.push_back(y);
      wv.push_back(v);
      fv.push_back(std::pow(v, p - 1.0));
    }
  const double tmax = 0.5 / h;
  const double dt = tmax / radial;
  std::vector<cplx> d(angles, 0.0);
  for (int a = 0; a < angles; ++a) {
    const double ang = 2 * M_PI * a / angles;
    const double c = std::cos(ang), s = std::sin(ang);
    for (int r = 0; r <= radial; ++r) {
      const double t = r * dt;
      cplx W = 0, F = 0;
      for (std::size_t q = 0; q < ys.size(); ++q) {
        const cplx e = std::polar(1.0, -2 * M_PI * t * (c * ys[q][0] + s * ys[q][1]));
        W += wv[q] * e;
        F += fv[q] * e;
      }
      W *= h * h;
      F *= h * h;
      const double wt = (r == 0 || r == radial) ? 0.5 : 1.0;
      d[a] += wt * dt * t * F * std::conj(W);
    }
    d[a] *= 2 * M_PI / angles;
  }
  return d;
}

}  // namespace

ClosedFormMCF oracle_concentration(const BumpProfile& w, int dim, const CVec& Z0, double p,
                                   int sphere_quadrature, int radial_quadrature) {
  if (std::abs(Z0.norm() - 1.0) > 1e-12) throw std::invalid_argument("Z0 must be a unit vector");
  ClosedFormMCF mcf;
  mcf.dim = dim;
  mcf.N = static_cast<int>(Z0.size());
  OracleTerm t;
  t.spatial = PointMassSpatial{RVec::Zero(dim)};
  t.direction_normalized = false;
  t.atoms.push_back({Z0, true, Z0});
  if (dim == 1) {
    const auto coarse = concentration_weights_1d(w, p, radial_quadrature, 1);
    const auto fine = concentration_weights_1d(w, p, radial_quadrature, 2);
    for (int s = 0; s < 2; ++s)
      if (std::abs(fine[s] - coarse[s]) > 1e-6 * (std::abs(fine[0]) + std::abs(fine[1])))
        throw std::runtime_error("radial quadrature non-convergent under refinement");
    t.directions = {{RVec::Constant(1, 1.0), fine[0]}, {RVec::Constant(1, -1.0), fine[1]}};
  } else if (dim == 2) {
    const int m = 48;
    const auto coarse = concentration_weights_2d(w, p, sphere_quadrature, radial_quadrature / 2, m);
    const auto fine = concentration_weights_2d(w, p, sphere_quadrature, radial_quadrature, m);
    double scale = 0, diff = 0;
    for (std::size_t a = 0; a < fine.size(); ++a) {
      scale += std::abs(fine[a]);
      diff = std::max(diff, std::abs(fine[a] - coarse[a]));
    }
    if (diff > 1e-3 * scale) throw std::runtime_error("radial quadrature non-convergent under refinement");
    for (int a = 0; a < sphere_quadrature; ++a) {
      RVec xi(2);
      xi << std::cos(2 * M_PI * a / sphere_quadrature), std::sin(2 * M_PI * a / sphere_quadrature);
      t.directions.push_back({xi, fine[a]});
    }
  } else {
    throw std::invalid_argument("concentration oracle supports d = 1 and d = 2");
  }
  mcf.terms.push_back(std::move(t));
  return mcf;
}

ClosedFormMCF oracle_laminate(const ClosedFormMCF& omega1, const ClosedFormMCF& omega2,
                              const std::vector<ZAtom>& nu1, const std::vector<ZAtom>& nu2,
                              const CVec& A, const CVec& B, double theta, const RVec& n0) {
  if (!omega1.homogeneous() || !omega2.homogeneous())
    throw std::invalid_argument("lamination needs homogeneous component forms");
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("volume fraction must lie in (0,1)");
  if (omega1.N != omega2.N || omega1.dim != omega2.dim)
    throw std::invalid_argument("component forms differ in dimension");
  ClosedFormMCF out;
  out.dim = omega1.dim;
  out.N = omega1.N;
  out.c_dir = omega1.c_dir;
  auto append_scaled = [&out](const ClosedFormMCF& w, double s) {
    for (auto t : w.terms) {
      for (auto& a : t.atoms) a.weight *= s;
      // Per-term normalization is folded in so that both inputs may carry their own c_dir.
      if (t.direction_normalized && w.c_dir != out.c_dir)
        for (auto& a : t.atoms) a.weight *= w.c_dir / out.c_dir;
      out.terms.push_back(std::move(t));
    }
  };
  append_scaled(omega1, theta);
  append_scaled(omega2, 1 - theta);
  const CVec X = theta * A + (1 - theta) * B;
  OracleTerm mix;
  for (const auto& a : nu1) mix.atoms.push_back({a.z, false, theta * a.mass * (A - X)});
  for (const auto& a : nu2) mix.atoms.push_back({a.z, false, (1 - theta) * a.mass * (B - X)});
  const RVec e = n0.normalized();
  mix.directions = {{e, 1.0}, {-e, 1.0}};
  out.terms.push_back(std::move(mix));
  return out;
}

Calibration calibrate_direction(const LimitParams& params) {
  if (params.grid.dim() != 1) throw std::invalid_argument("calibration runs on a 1-d grid");
  const Profile sine = sine_profile(CVec::Constant(1, 1.0));
  const auto gen = oscillation(sine, RVec::Constant(1, 1.0));
  const auto f = integrands::identity(2.0, 1);
  const auto psi = MultiplierSymbol::identity(1);
  const cplx empirical = pairing_limit(f, psi, gen, params).value;
  const auto raw = oracle_oscillation(sine.atoms, sine.mean, RVec::Constant(1, 1.0), 1.0);
  const cplx oracle = eval_closed_form(raw, f, psi);
  const double ratio = empirical.real() / oracle.real();
  const bool near_half = std::abs(ratio - 0.5) <= 0.05 * 0.5;
  const bool near_one = std::abs(ratio - 1.0) <= 0.05;
  if (!near_half && !near_one)
    throw std::runtime_error("direction calibration ratio " + std::to_string(ratio) +
                             " is near neither 1/2 nor 1");
  return {ratio, empirical.real(), oracle.real()};
}

namespace {
nlohmann::json cvec_json(const CVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}
nlohmann::json rvec_json(const RVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
}  // namespace

nlohmann::json to_json(const ClosedFormMCF& mcf) {
  nlohmann::json j;
  j["dim"] = mcf.dim;
  j["N"] = mcf.N;
  j["c_dir"] = mcf.c_dir;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : mcf.terms) {
    nlohmann::json jt;
    if (std::holds_alternative<LebesgueSpatial>(t.spatial)) {
      jt["spatial"] = "lebesgue";
    } else {
      jt["spatial"] = {{"point_mass", rvec_json(std::get<PointMassSpatial>(t.spatial).x0)}};
    }
    jt["direction_normalized"] = t.direction_normalized;
    for (const auto& a : t.atoms)
      jt["atoms"].push_back(
          {{"location", cvec_json(a.location)}, {"infinite", a.at_infinity}, {"weight", cvec_json(a.weight)}});
    for (const auto& d : t.directions)
      jt["directions"].push_back({{"xi", rvec_json(d.xi)}, {"weight", {d.weight.real(), d.weight.imag()}}});
    j["terms"].push_back(jt);
  }
  return j;
}

}  // namespace mcf
