// Test integrands f(x,z,q) = h(x,z).q of controlled (p-1)-growth and the
// sphere compactification transform.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcf/grid.hpp"

namespace mcf {

using VerticalFn = std::function<CVec(const CVec& z)>;
using SpatialFn = std::function<cplx(const RVec& x)>;

/// One product term phi(x) h(z). An empty phi means phi = 1.
struct IntegrandTerm {
  SpatialFn phi;
  VerticalFn h;
  /// h^infty on unit vectors, present when S^{p-1}h extends to the sphere.
  std::optional<VerticalFn> recession;
};

/// Finite sum of product terms sharing exponent p and dimension N.
class TestIntegrand {
 public:
  TestIntegrand(double p, int N, VerticalFn h, std::optional<VerticalFn> recession,
                std::string name);

  /// Builds h = S^{-(p-1)} g from g given on the closed unit ball; h^infty = g on the sphere.
  static TestIntegrand from_compactified(double p, int N, VerticalFn g, std::string name);

  double p() const { return p_; }
  int N() const { return N_; }
  const std::string& name() const { return name_; }
  const std::vector<IntegrandTerm>& terms() const { return terms_; }

  bool has_recession() const;
  bool spatially_constant() const;

  CVec eval(const RVec& x, const CVec& z) const;
  /// Vertical factor with all spatial factors set to 1.
  CVec h(const CVec& z) const;
  CVec recession(const RVec& x, const CVec& e) const;

  TestIntegrand times(SpatialFn phi, const std::string& label) const;
  TestIntegrand scaled(cplx alpha) const;
  TestIntegrand plus(const TestIntegrand& other) const;

 private:
  TestIntegrand() = default;
  double p_ = 2;
  int N_ = 1;
  std::string name_;
  std::vector<IntegrandTerm> terms_;
};

enum class SDirection { Compactify, Decompactify };

/// S^q (compactify) or S^{-q} (decompactify). The sphere value for compactify
/// comes from `boundary` and is an error when none is supplied.
VerticalFn s_transform(VerticalFn fn, double q, SDirection direction,
                       std::optional<VerticalFn> boundary = std::nullopt);

struct FpNormResult {
  double norm;
  VerticalFn recession;
};

/// sup |S^{p-1}h| over ball samples of the vertical factor (spatial factors set to 1).
FpNormResult fp_norm_and_recession(const TestIntegrand& f, int density = 64);

/// w = z / (1 + |z|).
CVec to_ball(const CVec& z);

namespace integrands {

TestIntegrand identity(double p, int N);
/// |z|^{p-2} z.
TestIntegrand power(double p, int N);
/// g_K(|z|) |z|^{p-2} z with g = 0 below 1/2, 2t-1 on [1/2,1], 1 above.
TestIntegrand truncation(double p, int N, double K);
double truncation_profile(double t);
/// Triangular bump in ball coordinates around to_ball(z0) times output vector v.
TestIntegrand window(double p, const CVec& z0, double width, const CVec& v);
/// Sphere-cap bump around the unit vector e0 in ball coordinates.
TestIntegrand window_at_infinity(double p, const CVec& e0, double width, const CVec& v);
/// h(z) = z |z| / (1 + |z|), a bounded perturbation of the identity.
TestIntegrand soft_identity(int N);
/// h(z) = z^2 / (1 + |z|) componentwise on the first entry, for N = 1.
TestIntegrand quadratic_ratio();

}  // namespace integrands

/// Reproducible finite family: trigonometric phi times Bernstein-type g on the ball.
std::vector<TestIntegrand> test_battery(double p, int N, int dim, int count);

}  // namespace mcf
