// Generators of oscillating, concentrating and laminated sequences u_j.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcf/grid.hpp"

namespace mcf {

/// Point mass of a Young measure.
struct ZAtom {
  CVec z;
  double mass;
};

/// 1-periodic profile s -> C^N with its mean, Young measure atoms and harmonic bandwidth.
struct Profile {
  std::function<CVec(double s)> w;
  int N;
  CVec mean;
  std::vector<ZAtom> atoms;
  double bandwidth;
  std::string name;
};

/// A on [0, theta), B on [theta, 1).
Profile two_state(const CVec& A, const CVec& B, double theta);
/// amplitude * sin(2 pi s); atoms are an equal-weight quadrature of the arcsine law.
Profile sine_profile(const CVec& amplitude, int quadrature_atoms = 64);

/// Compactly supported profile on R^d used by concentrations.
struct BumpProfile {
  std::function<double(const RVec& y)> w;
  double support_radius;
  std::string name;
};

/// max(0, 1 - 4|y|).
BumpProfile tent_profile();
/// exp(1 - 1/(1 - (4|y|)^2)) inside |y| < 1/4.
BumpProfile smooth_bump_profile();

class SequenceGenerator {
 public:
  using PointFn = std::function<CVec(int j, const RVec& x)>;

  struct Spec {
    std::string kind;
    int dim = 1;
    int N = 1;
    double p = 2.0;
    PointFn value;
    FieldFn weak_limit;
    std::optional<CVec> constant_limit;
    /// Lowest and highest active frequency magnitudes at index j.
    std::function<double(int)> lowest;
    std::function<double(int)> highest;
    std::function<void(int j, const Grid&)> validate;
    std::string description;
  };

  explicit SequenceGenerator(Spec spec);

  const std::string& kind() const { return spec_.kind; }
  const std::string& description() const { return spec_.description; }
  int dim() const { return spec_.dim; }
  int N() const { return spec_.N; }
  double p() const { return spec_.p; }

  CVec value(int j, const RVec& x) const { return spec_.value(j, x); }
  SampledField emit(int j, const Grid& grid) const;
  SampledField weak_limit(const Grid& grid) const;
  CVec weak_limit_at(const RVec& x) const { return spec_.weak_limit(x); }
  const std::optional<CVec>& constant_limit() const { return spec_.constant_limit; }
  double lowest_frequency(int j) const { return spec_.lowest(j); }
  double highest_frequency(int j) const { return spec_.highest(j); }

 private:
  void check_grid(const Grid& grid) const;
  Spec spec_;
};

/// u_j(x) = w(j m.x) where m is the primitive integer vector along `direction`.
SequenceGenerator oscillation(const Profile& profile, const RVec& direction, double p = 2.0);
/// u_j(x) = Z0 j^{d/p} w(j x~) with x~ the representative of x in [-1/2, 1/2)^d.
SequenceGenerator concentration(const BumpProfile& w, const CVec& Z0, double p, int dim);
SequenceGenerator constant_sequence(const CVec& c, int dim, double p = 2.0);
/// u_j = u + amplitude/j * sin(2 pi j x1); converges strongly to the constant u.
SequenceGenerator strongly_convergent(const CVec& u, const CVec& amplitude, int dim);
/// Strip construction w_{j,k}: gen1 on strips of width theta/k, gen2 on the rest, along axis n0.
SequenceGenerator laminate_mix(const SequenceGenerator& gen1, const SequenceGenerator& gen2,
                               double theta, const RVec& n0, int k);
/// Slow field wbar_k of a laminate: A on gen1 strips, B on gen2 strips, 0 where uncovered.
SampledField laminate_slow_field(const CVec& A, const CVec& B, double theta, const RVec& n0, int k,
                                 const Grid& grid);
/// Replaces the values of `inner` by those of `outer` outside the periodic interval (a, b) of axis 0.
SequenceGenerator splice_outside(const SequenceGenerator& inner, const SequenceGenerator& outer,
                                 double a, double b);

/// Primitive integer vector along a rational direction; throws for irrational input.
std::vector<int> primitive_direction(const RVec& direction);

/// Evaluates a generator-backed field once per index; convenience for osc_profile style use.
SampledField osc_profile(const Profile& profile, const RVec& n0, int j, const Grid& grid);

}  // namespace mcf
