// Young measures, H-measure pairs, equiintegrability and wavefront indicators
// extracted from sequences and their empirical pairings.
#pragma once

#include <iosfwd>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcf/pairing.hpp"

namespace mcf {

struct AtomicYoungMeasure {
  std::vector<ZAtom> atoms;
  /// Mass sum before renormalization (from-mcf mode); 1 for histograms.
  double raw_total = 1.0;

  /// Mass of the atom nearest to z.
  double mass_near(const CVec& z) const;
};

struct HistogramMode {};
struct FromMcfMode {
  double epsilon;
  /// Known atom locations; the count fixes the size of the linear system.
  std::vector<CVec> atoms;
};
using YoungMode = std::variant<HistogramMode, FromMcfMode>;

AtomicYoungMeasure young_measure(const SequenceGenerator& gen, const YoungMode& mode,
                                 const LimitParams& params);

struct HMeasureValue {
  cplx value;
  double spread;
  std::vector<cplx> per_j;
};

/// lim_j sum_{k != 0} F[phi1 (u_j - u)](k) . conj(psi(k/|k|) F[phi2 (u_j - u)](k)), p = 2.
/// psi is 1x1 (applied as psi * I) or N x N.
HMeasureValue hmeasure_pair(const SpatialFn& phi1, const SpatialFn& phi2, const MultiplierSymbol& psi,
                            const SequenceGenerator& gen, const LimitParams& params);

struct EquiintResult {
  double value;
  std::vector<double> K_list;
  std::vector<double> per_K;
  bool stable;
};

/// |<<f_K (x) I, omega>>| with the truncation integrand, reported at the largest K.
EquiintResult equiint_indicator(const SequenceGenerator& gen, const std::vector<double>& K_list,
                                const LimitParams& params);

struct ZTarget {
  CVec z;  // unit vector when at_infinity
  bool at_infinity = false;
  std::string label() const;
};

struct WavefrontWidths {
  double x_width = 0.125;
  double z_width = 0.25;
  double cone_half_angle = M_PI / 8;
};

struct WavefrontSample {
  RVec x0;
  ZTarget z0;
  RVec xi0;
  double indicator;
};

/// cos^2 bump of radius `width` around x0 in periodic distance.
SpatialFn spatial_bump(const RVec& x0, double width);

WavefrontSample wavefront_indicator(const SequenceGenerator& gen, const RVec& x0, const ZTarget& z0,
                                    const RVec& xi0, const WavefrontWidths& widths,
                                    const LimitParams& params);

struct WavefrontScan {
  std::vector<WavefrontSample> samples;
  double max_indicator = 0;
  /// 0.1 x max over the scan.
  double threshold = 0;
  std::vector<bool> above;
};

WavefrontScan wavefront_scan(const SequenceGenerator& gen, const std::vector<RVec>& x_points,
                             const std::vector<ZTarget>& z_points, const std::vector<RVec>& directions,
                             const WavefrontWidths& widths, const LimitParams& params);

/// Columns x0 (per axis), z-label, xi-angle, indicator, above_threshold.
void write_wavefront_csv(const WavefrontScan& scan, std::ostream& out);

}  // namespace mcf
