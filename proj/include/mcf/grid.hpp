// Periodic grids on the unit torus, sampled vector fields and the discrete
// Fourier transform.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mcf {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Uniform grid of n^d cells on [0,1)^d. Samples sit at cell centers.
class Grid {
 public:
  Grid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }

  /// Per-axis indices of a flat index; the last axis varies fastest.
  std::array<int, 3> multi_index(std::size_t flat) const;
  /// Cell center (i+1/2)/n per axis.
  RVec point(std::size_t flat) const;
  /// Signed integer frequency in (-n/2, n/2] per axis for a flat spectral index.
  RVec frequency(std::size_t flat) const;

  static int signed_frequency(int index, int n);

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
  double cell_volume_;
};

/// C^N-valued samples, stored point-major: values[point * N + component].
class SampledField {
 public:
  SampledField(Grid grid, int components);
  SampledField(Grid grid, int components, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t points() const { return grid_.size(); }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  CVec at(std::size_t point) const;
  void set(std::size_t point, const CVec& value);
  cplx& operator()(std::size_t point, int component) {
    return values_[point * components_ + component];
  }
  cplx operator()(std::size_t point, int component) const {
    return values_[point * components_ + component];
  }

  SampledField& operator+=(const SampledField& other);
  SampledField& operator-=(const SampledField& other);
  SampledField& operator*=(cplx scale);

 private:
  Grid grid_;
  int components_;
  std::vector<cplx> values_;
};

SampledField operator+(SampledField a, const SampledField& b);
SampledField operator-(SampledField a, const SampledField& b);
SampledField operator*(cplx s, SampledField a);

/// Fourier coefficients c_k = n^{-d} sum_x u(x) e^{-2 pi i k.x}, same layout as SampledField.
class SpectralField {
 public:
  SpectralField(Grid grid, int components, std::vector<cplx> coefficients);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::span<const cplx> coefficients() const { return coefficients_; }
  std::span<cplx> coefficients() { return coefficients_; }
  cplx operator()(std::size_t index, int component) const {
    return coefficients_[index * components_ + component];
  }
  cplx& operator()(std::size_t index, int component) {
    return coefficients_[index * components_ + component];
  }

 private:
  Grid grid_;
  int components_;
  std::vector<cplx> coefficients_;
};

using FieldFn = std::function<CVec(const RVec& x)>;

SampledField sample_field(const FieldFn& fn, const Grid& grid, int components);

/// Riemann sum of a scalar field.
cplx integrate(const SampledField& field);
/// Riemann sum of weight(value) over the cells.
cplx integrate(const SampledField& field, const std::function<cplx(const CVec&)>& weight);
/// Integral of a . conj(b), summed over components.
cplx inner(const SampledField& a, const SampledField& b);

SpectralField dft(const SampledField& field);
SampledField idft(const SpectralField& spectrum);

double lp_norm(const SampledField& field, double p);

/// Binary layout: int32 d, n, N (little-endian) then interleaved re/im doubles.
void write_binary(const SampledField& field, std::ostream& out);
SampledField read_binary(std::istream& in);
/// CSV rows: axis indices, coordinates, then re/im per component.
void write_csv(const SampledField& field, std::ostream& out);

}  // namespace mcf
