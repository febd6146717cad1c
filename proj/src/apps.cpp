#include "mcf/apps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcf/format.hpp"

namespace mcf {

RMat unvec(const CVec& v, int m, int d) {
  if (v.size() != m * d) throw std::invalid_argument("vector length differs from m*d");
  RMat A(m, d);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < d; ++k) A(i, k) = v[i * d + k].real();
  return A;
}

TestIntegrand anisotropy_integrand(int m, const RVec& n0) {
  const int d = static_cast<int>(n0.size());
  if (m < 1 || d < 1) throw std::invalid_argument("anisotropy integrand needs m, d >= 1");
  const RMat P = RMat::Identity(d, d) - n0.normalized() * n0.normalized().transpose();
  auto h = [m, d, P](const CVec& z) -> CVec {
    CVec out(m * d);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < d; ++k) {
        cplx s = 0;
        for (int l = 0; l < d; ++l) s += z[i * d + l] * P(l, k);
        out[i * d + k] = s;
      }
    return out;
  };
  return TestIntegrand(2.0, m * d, h, h, "anisotropy");
}

double anisotropy_energy(const RMat& A, const RVec& n0) {
  const RVec e = n0.normalized();
  return A.squaredNorm() - (A * e).squaredNorm();
}

namespace {

TestIntegrand truncated(const TestIntegrand& f, double K) {
  std::optional<TestIntegrand> out;
  for (const auto& t : f.terms()) {
    const VerticalFn h = t.h;
    TestIntegrand piece(
        f.p(), f.N(),
        [h, K](const CVec& z) -> CVec {
          const double g = integrands::truncation_profile(z.norm() / K);
          return g > 0 ? CVec(g * h(z)) : CVec::Zero(h(z).size());
        },
        t.recession, f.name() + "-truncated");
    if (t.phi) piece = piece.times(t.phi, "phi");
    out = out ? out->plus(piece) : piece;
  }
  return *out;
}

}  // namespace

RelaxationReport relaxed_functional(const TestIntegrand& f, const AtomicYoungMeasure& nu,
                                    const SampledField& gradu, const SequenceGenerator& gen,
                                    const LimitParams& params, const std::vector<double>& K_list,
                                    int cone_directions) {
  const int N = gen.N();
  const int d = gen.dim();
  if (f.N() != N || gradu.components() != N) throw std::invalid_argument("integrand, sequence and gradient differ in N");
  if (!(gradu.grid() == params.grid)) throw std::invalid_argument("gradient must live on the pairing grid");
  if (K_list.size() < 2) throw std::invalid_argument("K_list needs at least two levels");

  RelaxationReport rep;
  const Grid& grid = params.grid;
  cplx young = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const RVec x = grid.point(i);
    const CVec g = gradu.at(i);
    for (const auto& a : nu.atoms) young += a.mass * f.eval(x, a.z).dot(g);
  }
  // CVec::dot conjugates its left argument; undo to obtain h . conj(grad u).
  rep.young_part = std::conj(young * grid.cell_volume()).real();

  const auto I = MultiplierSymbol::identity(N);
  const auto total = pairing_limit(f, I, gen, params);
  rep.spread = total.spread;
  std::vector<double> trunc;
  for (double K : K_list) trunc.push_back(pairing_limit(truncated(f, K), I, gen, params).value.real());
  rep.infinite_part = trunc.back();
  rep.finite_part = total.value.real() - rep.infinite_part;
  rep.value = rep.young_part + rep.finite_part + rep.infinite_part;
  if (std::abs(trunc.back() - trunc[trunc.size() - 2]) > params.tolerance)
    rep.warnings.push_back("concentration part unstable across the two largest K");

  const SampledField u = gen.emit(params.j_list.back(), grid);
  double direct = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVec z = u.at(i);
    direct += std::conj(f.eval(grid.point(i), z).dot(z)).real();
  }
  rep.direct_value = direct * grid.cell_volume();

  if (N % d == 0 && gen.p() == 2.0) {
    const auto curl = DiffOperator::curl(N / d, d);
    rep.curl_residual = afree_converse_stat(gen, curl, params).mcf_stat;
    const double scale = fluctuation_scale(gen, grid, params.j_list.back());
    if (rep.curl_residual > 1e-2 * scale + 1e-12)
      rep.warnings.push_back("sequence is not asymptotically curl-free: residual " + format_real(rep.curl_residual));
  }

  if (cone_directions > 0) {
    rep.directions = sphere_grid(d, cone_directions);
    const double half = d == 1 ? M_PI / 2 : 2 * M_PI / cone_directions;
    const auto id = integrands::identity(gen.p(), N);
    for (const auto& xi : rep.directions)
      rep.cone_masses.push_back(
          std::abs(pairing_limit(id, MultiplierSymbol::cone_cutoff(N, xi, half), gen, params).value));
  }
  return rep;
}

namespace {

double envelope(const MatrixIntegrand& g, const RMat& A, int depth, const LaminationGrid& grid) {
  if (depth == 0) return g(A);
  double best = envelope(g, A, depth - 1, grid);
  for (const auto& n : grid.directions)
    for (const auto& c : grid.amplitudes) {
      const RMat cn = c * n.transpose();
      for (double th : grid.thetas) {
        const double cand = th * envelope(g, A + (1 - th) * cn, depth - 1, grid) +
                            (1 - th) * envelope(g, A - th * cn, depth - 1, grid);
        if (cand < best - 1e-12 * (1 + std::abs(best))) best = cand;
      }
    }
  return best;
}

}  // namespace

double qc_envelope_lamination(const MatrixIntegrand& g, const RMat& A, int depth, const LaminationGrid& grid) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  for (double th : grid.thetas)
    if (!(th > 0 && th < 1)) throw std::invalid_argument("lamination fractions must lie in (0,1)");
  for (const auto& n : grid.directions)
    if (n.size() != A.cols()) throw std::invalid_argument("lamination direction has wrong length");
  for (const auto& c : grid.amplitudes)
    if (c.size() != A.rows()) throw std::invalid_argument("lamination amplitude has wrong length");
  return envelope(g, A, depth, grid);
}

namespace {

SampledField shift(const SampledField& u, double a, double tau) {
  const int N = u.components();
  return apply_lattice_symbol(
      [N, a, tau](const RVec& k) -> CMat {
        return std::polar(1.0, 2 * M_PI * k[0] * a * tau) * CMat::Identity(N, N);
      },
      N, u);
}

double l2(const SampledField& u) {
  double s = 0;
  for (const auto& v : u.values()) s += std::norm(v);
  return std::sqrt(s * u.grid().cell_volume());
}

}  // namespace

void transport_solve(TransportRun& run, const SampledField& u0, double T, const std::vector<double>& sample_times) {
  if (u0.grid().dim() != 1) throw std::invalid_argument("transport runs on the 1-d torus");
  if (!(T >= 0)) throw std::invalid_argument("final time must be nonnegative");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw std::invalid_argument("sample times must be sorted");
  for (double t : sample_times)
    if (t < 0 || t > T) throw std::invalid_argument("sample time outside [0, T]");
  const double a = run.speed;
  const double dt = run.dt > 0 ? run.dt : 1.0 / (8.0 * (u0.grid().n() / 2));
  run.times.clear();
  run.snapshots.clear();

  if (!run.lambda) {
    for (double t : sample_times) {
      run.times.push_back(t);
      run.snapshots.push_back(shift(u0, a, t));
    }
    return;
  }
  const double lambda = *run.lambda;
  const double norm0 = l2(u0);
  SampledField u = u0;
  double t = 0;
  for (double target : sample_times) {
    const double span = target - t;
    const int steps = span > 0 ? static_cast<int>(std::ceil(span / dt - 1e-9)) : 0;
    const double h = steps ? span / steps : 0;
    for (int s = 0; s < steps; ++s) {
      SampledField mid = u;
      mid *= cplx(1 + 0.5 * h * lambda);
      mid = shift(mid, a, 0.5 * h);
      SampledField gmid = mid;
      gmid *= cplx(h * lambda);
      u = shift(u, a, h) + shift(gmid, a, 0.5 * h);
      t += h;
      if (l2(u) > std::exp(2 * run.growth_constant * T) * (norm0 + 1e-12))
        throw std::runtime_error("step instability: solution norm exceeds e^{2CT} bound at t=" + format_real(t));
    }
    t = target;
    run.times.push_back(target);
    run.snapshots.push_back(u);
  }
}

SequenceGenerator transport_sequence(std::function<cplx(int j, double x)> u0, int bandwidth, double speed,
                                     std::optional<double> lambda, std::string name) {
  if (bandwidth < 0) throw std::invalid_argument("bandwidth must be nonnegative");
  SequenceGenerator::Spec s;
  s.kind = "transport";
  s.dim = 2;
  s.N = 2;
  const double lam = lambda.value_or(0.0);
  s.value = [u0, speed, lam](int j, const RVec& y) -> CVec {
    const double t = y[0];
    const cplx u = std::exp(lam * t) * u0(j, y[1] + speed * t);
    CVec out(2);
    out << u, lam * u;
    return out;
  };
  s.weak_limit = [](const RVec&) { return CVec::Zero(2); };
  s.constant_limit = CVec::Zero(2);
  const double stretch = std::sqrt(1 + speed * speed);
  s.lowest = [bandwidth, stretch](int j) { return std::max(0, j - bandwidth) * stretch; };
  s.highest = [bandwidth, stretch](int j) { return (j + bandwidth) * stretch; };
  s.validate = [](int, const Grid&) {};
  s.description = name;
  return SequenceGenerator(std::move(s));
}

SpaceTimeTest standard_space_time_bump() {
  SpaceTimeTest b;
  b.phi = [](const RVec& y) -> cplx {
    const double s = std::sin(M_PI * y[0]);
    return s * s * (1 + 0.5 * std::cos(2 * M_PI * y[1]));
  };
  b.dphi_dt = [](const RVec& y) -> cplx {
    return M_PI * std::sin(2 * M_PI * y[0]) * (1 + 0.5 * std::cos(2 * M_PI * y[1]));
  };
  b.dphi_dx = [](const RVec& y) -> cplx {
    const double s = std::sin(M_PI * y[0]);
    return -M_PI * s * s * std::sin(2 * M_PI * y[1]);
  };
  return b;
}

ExtendedSystemResult extended_system_residual(const SequenceGenerator& gen, const SpaceTimeTest& phi,
                                              const VerticalFn& h, const std::function<CMat(const CVec&)>& Dh,
                                              const MultiplierSymbol& psi, const RMat& A_x,
                                              const LimitParams& params) {
  if (gen.dim() != 2) throw std::invalid_argument("extended system runs on the (t, x) torus");
  if (gen.N() % 2 != 0) throw std::invalid_argument("extended system needs pairs (u, g(u))");
  const int m = gen.N() / 2;
  if (A_x.rows() != m || A_x.cols() != m) throw std::invalid_argument("coefficient must be m x m");

  const CMat A = A_x.cast<cplx>();
  for (int s = 0; s < 16; ++s) {
    CVec z(m);
    for (int c = 0; c < m; ++c) z[c] = -3.0 + 6.0 * ((s + 7 * c) % 16) / 15.0;
    const CMat D = Dh(z);
    if ((A.adjoint() * D - D * A).norm() > 1e-10 * (1 + D.norm()))
      throw std::invalid_argument("structural commutation relations violated");
  }

  const double p = gen.p();
  const int N = gen.N();
  const TestIntegrand time_part(
      p, N, [h, m](const CVec& z) -> CVec {
        CVec out = CVec::Zero(2 * m);
        out.head(m) = h(z.head(m));
        return out;
      },
      std::nullopt, "h(z1).q1");
  const TestIntegrand space_part(
      p, N, [h, m, A](const CVec& z) -> CVec {
        CVec out = CVec::Zero(2 * m);
        out.head(m) = -(A.adjoint() * h(z.head(m)));
        return out;
      },
      std::nullopt, "-A*h(z1).q1");
  const TestIntegrand lhs_f = time_part.times(phi.dphi_dt, "dt phi").plus(space_part.times(phi.dphi_dx, "dx phi"));
  const TestIntegrand rhs_f = TestIntegrand(
      p, N, [h, Dh, m](const CVec& z) -> CVec {
        CVec out(2 * m);
        out.head(m) = Dh(z.head(m)) * z.tail(m);
        out.tail(m) = h(z.head(m));
        return out;
      },
      std::nullopt, "Dh(z1)z2.q1 + h(z1).q2").times(phi.phi, "phi");

  const auto lhs = pairing_limit(lhs_f, psi, gen, params);
  const auto rhs = pairing_limit(rhs_f, psi, gen, params);
  ExtendedSystemResult out;
  out.lhs = lhs.value;
  out.rhs = rhs.value;
  out.residual = std::abs(lhs.value + rhs.value);
  out.j_list = lhs.j_list;
  for (std::size_t a = 0; a < lhs.table.size(); ++a)
    out.per_j.push_back(std::abs(lhs.table[a].back() + rhs.table[a].back()));
  return out;
}

nlohmann::json to_json(const RelaxationReport& r) {
  nlohmann::json j;
  j["value"] = r.value;
  j["young_part"] = r.young_part;
  j["finite_part"] = r.finite_part;
  j["infinite_part"] = r.infinite_part;
  j["spread"] = r.spread;
  j["direct_value"] = r.direct_value;
  j["curl_residual"] = r.curl_residual;
  j["cone_masses"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.directions.size(); ++i) {
    nlohmann::json xi = nlohmann::json::array();
    for (int a = 0; a < r.directions[i].size(); ++a) xi.push_back(r.directions[i][a]);
    j["cone_masses"].push_back({{"xi", xi}, {"mass", r.cone_masses[i]}});
  }
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::json to_json(const TransportRun& run) {
  nlohmann::json j;
  j["speed"] = run.speed;
  j["lambda"] = run.lambda ? nlohmann::json(*run.lambda) : nlohmann::json(nullptr);
  j["growth_constant"] = run.growth_constant;
  j["dt"] = run.dt;
  j["times"] = run.times;
  j["l2_norms"] = nlohmann::json::array();
  for (const auto& s : run.snapshots) j["l2_norms"].push_back(l2(s));
  return j;
}

}  // namespace mcf
