#include "mcf/testfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mcf {

TestIntegrand::TestIntegrand(double p, int N, VerticalFn h, std::optional<VerticalFn> recession,
                             std::string name)
    : p_(p), N_(N), name_(std::move(name)) {
  if (!(p > 1.0)) throw std::invalid_argument("integrand exponent must exceed 1");
  if (N < 1) throw std::invalid_argument("integrand dimension must be positive");
  terms_.push_back({SpatialFn{}, std::move(h), std::move(recession)});
}

TestIntegrand TestIntegrand::from_compactified(double p, int N, VerticalFn g, std::string name) {
  auto h = s_transform(g, p - 1.0, SDirection::Decompactify);
  return TestIntegrand(p, N, h, g, std::move(name));
}

bool TestIntegrand::has_recession() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const IntegrandTerm& t) { return t.recession.has_value(); });
}

bool TestIntegrand::spatially_constant() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const IntegrandTerm& t) { return !t.phi; });
}

CVec TestIntegrand::eval(const RVec& x, const CVec& z) const {
  CVec out = CVec::Zero(N_);
  for (const auto& t : terms_) {
    CVec v = t.h(z);
    out += t.phi ? CVec(t.phi(x) * v) : v;
  }
  return out;
}

CVec TestIntegrand::h(const CVec& z) const {
  CVec out = CVec::Zero(N_);
  for (const auto& t : terms_) out += t.h(z);
  return out;
}

CVec TestIntegrand::recession(const RVec& x, const CVec& e) const {
  CVec out = CVec::Zero(N_);
  for (const auto& t : terms_) {
    if (!t.recession) throw std::invalid_argument("integrand '" + name_ + "' has no recession data");
    CVec v = (*t.recession)(e);
    out += t.phi ? CVec(t.phi(x) * v) : v;
  }
  return out;
}

TestIntegrand TestIntegrand::times(SpatialFn phi, const std::string& label) const {
  TestIntegrand out = *this;
  out.name_ = label + "*" + name_;
  for (auto& t : out.terms_) {
    if (t.phi) {
      auto prev = t.phi;
      t.phi = [prev, phi](const RVec& x) { return prev(x) * phi(x); };
    } else {
      t.phi = phi;
    }
  }
  return out;
}

TestIntegrand TestIntegrand::scaled(cplx alpha) const {
  TestIntegrand out = *this;
  for (auto& t : out.terms_) {
    auto h = t.h;
    t.h = [h, alpha](const CVec& z) -> CVec { return alpha * h(z); };
    if (t.recession) {
      auto r = *t.recession;
      t.recession = [r, alpha](const CVec& e) -> CVec { return alpha * r(e); };
    }
  }
  return out;
}

TestIntegrand TestIntegrand::plus(const TestIntegrand& other) const {
  if (other.N_ != N_ || other.p_ != p_)
    throw std::invalid_argument("integrands differ in exponent or dimension");
  TestIntegrand out = *this;
  out.name_ = name_ + "+" + other.name_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

VerticalFn s_transform(VerticalFn fn, double q, SDirection direction,
                       std::optional<VerticalFn> boundary) {
  if (!(q > 0)) throw std::invalid_argument("S^q transform needs q > 0");
  if (direction == SDirection::Decompactify) {
    return [fn, q](const CVec& z) -> CVec {
      const double r = z.norm();
      return std::pow(1.0 + r, q) * fn(z / (1.0 + r));
    };
  }
  return [fn, q, boundary](const CVec& w) -> CVec {
    const double r = w.norm();
    if (r >= 1.0) {
      if (r > 1.0 + 1e-12) throw std::invalid_argument("compactified map evaluated outside the ball");
      if (!boundary) throw std::invalid_argument("no recession function for sphere evaluation");
      return (*boundary)(w / r);
    }
    return std::pow(1.0 - r, q) * fn(w / (1.0 - r));
  };
}

CVec to_ball(const CVec& z) { return z / (1.0 + z.norm()); }

namespace {

// Deterministic sample set of the closed unit ball of C^N viewed as R^{2N}.
std::vector<CVec> ball_samples(int N, int density) {
  std::vector<CVec> pts;
  if (N == 1) {
    for (int a = 0; a < density; ++a)
      for (int b = 0; b < density; ++b) {
        double re = -1.0 + 2.0 * (a + 0.5) / density;
        double im = -1.0 + 2.0 * (b + 0.5) / density;
        if (re * re + im * im <= 1.0) pts.push_back(CVec::Constant(1, cplx(re, im)));
      }
  } else {
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int count = density * density;
    for (int i = 0; i < count; ++i) {
      CVec v(N);
      for (int c = 0; c < N; ++c) v[c] = cplx(g(rng), g(rng));
      v.normalize();
      pts.push_back(std::pow(u(rng), 1.0 / (2 * N)) * v);
    }
  }
  return pts;
}

std::vector<CVec> sphere_samples(int N, int density) {
  std::vector<CVec> pts;
  if (N == 1) {
    for (int a = 0; a < 4 * density; ++a)
      pts.push_back(CVec::Constant(1, std::polar(1.0, 2.0 * M_PI * a / (4 * density))));
  } else {
    std::mt19937_64 rng(20240602);
    std::normal_distribution<double> g;
    for (int i = 0; i < 4 * density; ++i) {
      CVec v(N);
      for (int c = 0; c < N; ++c) v[c] = cplx(g(rng), g(rng));
      pts.push_back(v.normalized());
    }
  }
  return pts;
}

}  // namespace

FpNormResult fp_norm_and_recession(const TestIntegrand& f, int density) {
  if (density < 2) throw std::invalid_argument("sample density too small");
  const double q = f.p() - 1.0;
  auto hfun = [f](const CVec& z) { return f.h(z); };
  auto compact = s_transform(hfun, q, SDirection::Compactify);

  VerticalFn rec;
  if (f.has_recession()) {
    rec = [f](const CVec& e) { return f.recession(RVec(), e); };
  } else {
    // Radial refinement r_m = 1 - 4^{-m}; require geometric Cauchy behaviour.
    for (const auto& e : sphere_samples(f.N(), std::max(4, density / 8))) {
      double prev_diff = INFINITY;
      CVec prev = compact((1.0 - std::pow(4.0, -3)) * e);
      for (int m = 4; m <= 10; ++m) {
        CVec cur = compact((1.0 - std::pow(4.0, -m)) * e);
        const double diff = (cur - prev).norm();
        if (!std::isfinite(diff) || (diff > 1e-8 && diff > 0.75 * prev_diff))
          throw std::runtime_error("no recession function");
        prev_diff = diff;
        prev = cur;
      }
      if (prev_diff > 1e-4 * (1.0 + prev.norm())) throw std::runtime_error("no recession function");
    }
    rec = [compact](const CVec& e) { return compact((1.0 - 1e-9) * e.normalized()); };
  }

  double norm = 0;
  for (const auto& w : ball_samples(f.N(), density)) norm = std::max(norm, compact(w).norm());
  for (const auto& e : sphere_samples(f.N(), density)) norm = std::max(norm, rec(e).norm());
  return {norm, rec};
}

namespace integrands {

TestIntegrand identity(double p, int N) {
  std::optional<VerticalFn> rec;
  if (p == 2.0) rec = [](const CVec& e) -> CVec { return e; };
  else if (p > 2.0) rec = [N](const CVec&) -> CVec { return CVec::Zero(N); };
  return TestIntegrand(p, N, [](const CVec& z) -> CVec { return z; }, rec, "identity");
}

TestIntegrand power(double p, int N) {
  return TestIntegrand(
      p, N,
      [p](const CVec& z) -> CVec {
        const double r = z.norm();
        return r > 0 ? CVec(std::pow(r, p - 2.0) * z) : CVec::Zero(z.size());
      },
      [](const CVec& e) -> CVec { return e; }, "power");
}

double truncation_profile(double t) {
  if (t < 0.5) return 0.0;
  if (t > 1.0) return 1.0;
  return 2.0 * t - 1.0;
}

TestIntegrand truncation(double p, int N, double K) {
  if (!(K > 0)) throw std::invalid_argument("truncation level must be positive");
  return TestIntegrand(
      p, N,
      [p, K](const CVec& z) -> CVec {
        const double r = z.norm();
        const double g = truncation_profile(r / K);
        return g > 0 ? CVec(g * std::pow(r, p - 2.0) * z) : CVec::Zero(z.size());
      },
      [](const CVec& e) -> CVec { return e; }, "truncation");
}

namespace {
TestIntegrand ball_window(double p, const CVec& w0, double width, const CVec& v, std::string name) {
  if (!(width > 0)) throw std::invalid_argument("window width must be positive");
  auto bump = [w0, width](const CVec& w) { return std::max(0.0, 1.0 - (w - w0).norm() / width); };
  auto h = [bump, p, v](const CVec& z) -> CVec {
    const double b = bump(to_ball(z));
    return b > 0 ? CVec(std::pow(1.0 + z.norm(), p - 1.0) * b * v) : CVec::Zero(v.size());
  };
  auto rec = [bump, v](const CVec& e) -> CVec { return bump(e) * v; };
  return TestIntegrand(p, static_cast<int>(v.size()), h, rec, std::move(name));
}
}  // namespace

TestIntegrand window(double p, const CVec& z0, double width, const CVec& v) {
  return ball_window(p, to_ball(z0), width, v, "window");
}

TestIntegrand window_at_infinity(double p, const CVec& e0, double width, const CVec& v) {
  return ball_window(p, e0.normalized(), width, v, "window-infinity");
}

TestIntegrand soft_identity(int N) {
  return TestIntegrand(
      2.0, N, [](const CVec& z) -> CVec { return z * (z.norm() / (1.0 + z.norm())); },
      [](const CVec& e) -> CVec { return e; }, "soft-identity");
}

TestIntegrand quadratic_ratio() {
  return TestIntegrand(
      2.0, 1,
      [](const CVec& z) -> CVec { return CVec::Constant(1, z[0] * z[0] / (1.0 + z.norm())); },
      [](const CVec& e) -> CVec { return CVec::Constant(1, e[0] * e[0]); }, "quadratic-ratio");
}

}  // namespace integrands

std::vector<TestIntegrand> test_battery(double p, int N, int dim, int count) {
  if (count < 1) throw std::invalid_argument("battery size must be positive");
  // phi_m: 1, cos(2 pi x1), sin(2 pi x_last), cos(2 pi (x1 + x_last)).
  std::vector<std::pair<std::string, SpatialFn>> phis = {
      {"1", SpatialFn{}},
      {"cos", [](const RVec& x) -> cplx { return std::cos(2 * M_PI * x[0]); }},
      {"sin", [dim](const RVec& x) -> cplx { return std::sin(2 * M_PI * x[dim - 1]); }},
      {"cos2", [dim](const RVec& x) -> cplx { return std::cos(2 * M_PI * (x[0] + x[dim - 1])); }},
  };
  // Degree-2 Bernstein basis in (Re w_c, Im w_c) mapped from [-1,1].
  auto bern = [](int i, double t) {
    const double s = 0.5 * (t + 1.0);
    static const double binom[3] = {1, 2, 1};
    return binom[i] * std::pow(s, i) * std::pow(1.0 - s, 2 - i);
  };
  std::vector<TestIntegrand> out;
  for (int m = 0; static_cast<int>(out.size()) < count; ++m) {
    const int a = m % 3;
    const int b = (m / 3) % 3;
    const int c = (m / 9) % N;
    const auto& [label, phi] = phis[(m / 9 / N + m) % phis.size()];
    VerticalFn g = [a, b, c, N, bern](const CVec& w) -> CVec {
      CVec out = CVec::Zero(N);
      out[c] = bern(a, w[c].real()) * bern(b, w[c].imag());
      return out;
    };
    auto f = TestIntegrand::from_compactified(
        p, N, g, "bernstein" + std::to_string(a) + std::to_string(b) + "_" + std::to_string(c));
    out.push_back(phi ? f.times(phi, label) : f);
  }
  return out;
}

}  // namespace mcf
