#include "mcf/synth.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcf {

namespace {

double frac(double s) { return s - std::floor(s); }

std::string vec_text(const CVec& v) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i].real();
    if (v[i].imag() != 0) os << (v[i].imag() > 0 ? "+" : "") << v[i].imag() << 'i';
  }
  os << ')';
  return os.str();
}

}  // namespace

Profile two_state(const CVec& A, const CVec& B, double theta) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("volume fraction must lie in (0,1)");
  if (A.size() != B.size()) throw std::invalid_argument("two-state values differ in dimension");
  Profile pr;
  pr.w = [A, B, theta](double s) -> CVec { return frac(s) < theta ? A : B; };
  pr.N = static_cast<int>(A.size());
  pr.mean = theta * A + (1 - theta) * B;
  pr.atoms = {{A, theta}, {B, 1 - theta}};
  pr.bandwidth = 1.0;
  pr.name = "two-state" + vec_text(A) + vec_text(B);
  return pr;
}

Profile sine_profile(const CVec& amplitude, int quadrature_atoms) {
  Profile pr;
  pr.w = [amplitude](double s) -> CVec { return std::sin(2 * M_PI * s) * amplitude; };
  pr.N = static_cast<int>(amplitude.size());
  pr.mean = CVec::Zero(amplitude.size());
  for (int i = 0; i < quadrature_atoms; ++i)
    pr.atoms.push_back({std::sin(2 * M_PI * (i + 0.5) / quadrature_atoms) * amplitude,
                        1.0 / quadrature_atoms});
  pr.bandwidth = 1.0;
  pr.name = "sine";
  return pr;
}

BumpProfile tent_profile() {
  return {[](const RVec& y) { return std::max(0.0, 1.0 - 4.0 * y.norm()); }, 0.25, "tent"};
}

BumpProfile smooth_bump_profile() {
  return {[](const RVec& y) {
            const double t = 4.0 * y.norm();
            return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
          },
          0.25, "smooth-bump"};
}

SequenceGenerator::SequenceGenerator(Spec spec) : spec_(std::move(spec)) {
  if (spec_.dim < 1 || spec_.dim > 3) throw std::invalid_argument("generator dimension out of range");
  if (!spec_.value || !spec_.weak_limit) throw std::invalid_argument("generator needs evaluators");
  if (!spec_.lowest) spec_.lowest = [](int) { return 0.0; };
  if (!spec_.highest) spec_.highest = [](int) { return 0.0; };
}

void SequenceGenerator::check_grid(const Grid& grid) const {
  if (grid.dim() != spec_.dim)
    throw std::invalid_argument("grid dimension differs from generator dimension");
}

SampledField SequenceGenerator::emit(int j, const Grid& grid) const {
  check_grid(grid);
  if (j < 1) throw std::invalid_argument("sequence index must be positive");
  if (spec_.validate) spec_.validate(j, grid);
  return sample_field([this, j](const RVec& x) { return spec_.value(j, x); }, grid, spec_.N);
}

SampledField SequenceGenerator::weak_limit(const Grid& grid) const {
  check_grid(grid);
  if (spec_.constant_limit) {
    SampledField f(grid, spec_.N);
    for (std::size_t i = 0; i < grid.size(); ++i) f.set(i, *spec_.constant_limit);
    return f;
  }
  return sample_field(spec_.weak_limit, grid, spec_.N);
}

std::vector<int> primitive_direction(const RVec& direction) {
  const double scale = direction.cwiseAbs().maxCoeff();
  if (!(scale > 0)) throw std::invalid_argument("direction must be nonzero");
  RVec v = direction / scale;
  for (int s = 1; s <= 64; ++s) {
    bool integral = true;
    for (int i = 0; i < v.size(); ++i)
      integral = integral && std::abs(s * v[i] - std::round(s * v[i])) < 1e-9;
    if (!integral) continue;
    std::vector<int> m(v.size());
    int g = 0;
    for (int i = 0; i < v.size(); ++i) {
      m[i] = static_cast<int>(std::lround(s * v[i]));
      g = std::gcd(g, std::abs(m[i]));
    }
    for (auto& c : m) c /= g;
    return m;
  }
  throw std::invalid_argument("irrational direction violates torus periodicity");
}

SequenceGenerator oscillation(const Profile& profile, const RVec& direction, double p) {
  const auto m = primitive_direction(direction);
  const int dim = static_cast<int>(m.size());
  double mnorm = 0;
  for (int c : m) mnorm += double(c) * c;
  mnorm = std::sqrt(mnorm);
  SequenceGenerator::Spec s;
  s.kind = "oscillation";
  s.dim = dim;
  s.N = profile.N;
  s.p = p;
  auto w = profile.w;
  s.value = [w, m](int j, const RVec& x) {
    double t = 0;
    for (std::size_t a = 0; a < m.size(); ++a) t += m[a] * x[a];
    return w(j * t);
  };
  CVec mean = profile.mean;
  s.weak_limit = [mean](const RVec&) { return mean; };
  s.constant_limit = mean;
  const double bw = profile.bandwidth;
  s.lowest = [mnorm](int j) { return j * mnorm; };
  s.highest = [mnorm, bw](int j) { return j * mnorm * bw; };
  std::ostringstream os;
  os << "oscillation of " << profile.name << " along (";
  for (std::size_t a = 0; a < m.size(); ++a) os << (a ? "," : "") << m[a];
  os << ")";
  s.description = os.str();
  return SequenceGenerator(std::move(s));
}

SequenceGenerator concentration(const BumpProfile& w, const CVec& Z0, double p, int dim) {
  SequenceGenerator::Spec s;
  s.kind = "concentration";
  s.dim = dim;
  s.N = static_cast<int>(Z0.size());
  s.p = p;
  auto wf = w.w;
  s.value = [wf, Z0, p, dim](int j, const RVec& x) -> CVec {
    RVec y(x.size());
    for (int a = 0; a < x.size(); ++a) y[a] = x[a] - std::floor(x[a] + 0.5);
    return std::pow(double(j), dim / p) * wf(j * y) * Z0;
  };
  const int N = s.N;
  s.weak_limit = [N](const RVec&) -> CVec { return CVec::Zero(N); };
  s.constant_limit = CVec::Zero(N);
  const double rho = w.support_radius;
  s.lowest = [](int j) { return double(j); };
  s.highest = [rho](int j) { return j / rho; };
  s.description = "concentration of " + w.name + " at 0 with Z0=" + vec_text(Z0);
  return SequenceGenerator(std::move(s));
}

SequenceGenerator constant_sequence(const CVec& c, int dim, double p) {
  SequenceGenerator::Spec s;
  s.kind = "constant";
  s.dim = dim;
  s.N = static_cast<int>(c.size());
  s.p = p;
  s.value = [c](int, const RVec&) { return c; };
  s.weak_limit = [c](const RVec&) { return c; };
  s.constant_limit = c;
  s.description = "constant " + vec_text(c);
  return SequenceGenerator(std::move(s));
}

SequenceGenerator strongly_convergent(const CVec& u, const CVec& amplitude, int dim) {
  SequenceGenerator::Spec s;
  s.kind = "strong";
  s.dim = dim;
  s.N = static_cast<int>(u.size());
  s.value = [u, amplitude](int j, const RVec& x) -> CVec {
    return u + std::sin(2 * M_PI * j * x[0]) / j * amplitude;
  };
  s.weak_limit = [u](const RVec&) { return u; };
  s.constant_limit = u;
  s.lowest = [](int j) { return double(j); };
  s.highest = [](int j) { return double(j); };
  s.description = "strongly convergent perturbation of " + vec_text(u);
  return SequenceGenerator(std::move(s));
}

namespace {

struct StripGeometry {
  int axis;
  int other;  // -1 in d = 1
  double theta;
  int k;
};

StripGeometry strip_geometry(const RVec& n0, double theta, int k) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("volume fraction must lie in (0,1)");
  if (k < 1) throw std::invalid_argument("strip count must be positive");
  const int dim = static_cast<int>(n0.size());
  if (dim > 2) throw std::invalid_argument("laminates are supported in d = 1 and d = 2");
  int axis = -1;
  for (int a = 0; a < dim; ++a)
    if (std::abs(std::abs(n0[a]) - 1.0) < 1e-12) axis = a;
  if (axis < 0 || std::abs(n0.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("lamination normal must be a coordinate axis");
  return {axis, dim == 2 ? 1 - axis : -1, theta, k};
}

// Locates x in the cube covering: returns family (0 = first, 1 = second, -1 = uncovered)
// and the rescaled cube coordinate y in [0,1)^d.
int locate(const StripGeometry& g, const RVec& x, RVec& y) {
  const double t = frac(x[g.axis]) * g.k;
  const double s = std::floor(t);
  double tau = t - s;  // in strip units
  int family = tau < g.theta ? 0 : 1;
  const double side = (family == 0 ? g.theta : 1.0 - g.theta) / g.k;
  if (family == 1) tau -= g.theta;
  y = RVec::Zero(x.size());
  y[g.axis] = std::min(tau / (family == 0 ? g.theta : 1.0 - g.theta), std::nextafter(1.0, 0.0));
  if (g.other >= 0) {
    const int cubes = static_cast<int>(std::floor(1.0 / side + 1e-9));
    const double xb = frac(x[g.other]);
    const int q = static_cast<int>(std::floor(xb / side));
    if (q >= cubes) return -1;
    y[g.other] = std::min((xb - q * side) / side, std::nextafter(1.0, 0.0));
  }
  return family;
}

}  // namespace

SequenceGenerator laminate_mix(const SequenceGenerator& gen1, const SequenceGenerator& gen2,
                               double theta, const RVec& n0, int k) {
  if (gen1.dim() != gen2.dim() || gen1.N() != gen2.N() || gen1.dim() != n0.size())
    throw std::invalid_argument("laminate components differ in dimension");
  if (!gen1.constant_limit() || !gen2.constant_limit())
    throw std::invalid_argument("laminate components need constant weak limits");
  const auto g = strip_geometry(n0, theta, k);
  const CVec A = *gen1.constant_limit();
  const CVec B = *gen2.constant_limit();
  const CVec X = theta * A + (1 - theta) * B;

  SequenceGenerator::Spec s;
  s.kind = "laminate";
  s.dim = gen1.dim();
  s.N = gen1.N();
  s.p = std::max(gen1.p(), gen2.p());
  const int N = s.N;
  s.value = [gen1, gen2, g, N](int j, const RVec& x) -> CVec {
    RVec y;
    const int family = locate(g, x, y);
    if (family < 0) return CVec::Zero(N);
    return family == 0 ? gen1.value(j, y) : gen2.value(j, y);
  };
  s.weak_limit = [X](const RVec&) { return X; };
  s.constant_limit = X;
  s.lowest = [k](int) { return double(k); };
  s.highest = [gen1, gen2, theta, k](int j) {
    return std::max(gen1.highest_frequency(j) * k / theta,
                    gen2.highest_frequency(j) * k / (1.0 - theta));
  };
  s.validate = [gen1, gen2, theta, k](int j, const Grid& grid) {
    const double fast = std::max(gen1.highest_frequency(j) * k / theta,
                                 gen2.highest_frequency(j) * k / (1.0 - theta));
    if (j < 8 * k || fast > grid.n() / 8.0) throw std::invalid_argument("scale separation violated");
  };
  s.description = "laminate(" + gen1.description() + " | " + gen2.description() +
                  ", theta=" + std::to_string(theta) + ", k=" + std::to_string(k) + ")";
  return SequenceGenerator(std::move(s));
}

SampledField laminate_slow_field(const CVec& A, const CVec& B, double theta, const RVec& n0, int k,
                                 const Grid& grid) {
  const auto g = strip_geometry(n0, theta, k);
  const int N = static_cast<int>(A.size());
  return sample_field(
      [&](const RVec& x) -> CVec {
        RVec y;
        const int family = locate(g, x, y);
        if (family < 0) return CVec::Zero(N);
        return family == 0 ? A : B;
      },
      grid, N);
}

SequenceGenerator splice_outside(const SequenceGenerator& inner, const SequenceGenerator& outer,
                                 double a, double b) {
  if (inner.dim() != outer.dim() || inner.N() != outer.N())
    throw std::invalid_argument("spliced generators differ in dimension");
  SequenceGenerator::Spec s;
  s.kind = "splice";
  s.dim = inner.dim();
  s.N = inner.N();
  s.p = inner.p();
  auto in_d = [a, b](const RVec& x) {
    const double t = frac(x[0]);
    return t > a && t < b;
  };
  s.value = [inner, outer, in_d](int j, const RVec& x) {
    return in_d(x) ? inner.value(j, x) : outer.value(j, x);
  };
  s.weak_limit = [inner, outer, in_d](const RVec& x) {
    return in_d(x) ? inner.weak_limit_at(x) : outer.weak_limit_at(x);
  };
  if (inner.constant_limit() && outer.constant_limit() &&
      (*inner.constant_limit() - *outer.constant_limit()).norm() == 0)
    s.constant_limit = inner.constant_limit();
  s.lowest = [inner, outer](int j) {
    return std::min(inner.lowest_frequency(j), outer.lowest_frequency(j));
  };
  s.highest = [inner, outer](int j) {
    return std::max(inner.highest_frequency(j), outer.highest_frequency(j));
  };
  s.description = "splice(" + inner.description() + " inside, " + outer.description() + " outside)";
  return SequenceGenerator(std::move(s));
}

SampledField osc_profile(const Profile& profile, const RVec& n0, int j, const Grid& grid) {
  return oscillation(profile, n0).emit(j, grid);
}

}  // namespace mcf
