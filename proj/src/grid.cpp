#include "mcf/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "mcf/format.hpp"

namespace mcf {

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw std::invalid_argument("grid points per axis must be a power of two >= 8, got " +
                                std::to_string(n));
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
  cell_volume_ = 1.0 / static_cast<double>(size_);
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

RVec Grid::point(std::size_t flat) const {
  auto idx = multi_index(flat);
  RVec x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = (idx[a] + 0.5) / n_;
  return x;
}

int Grid::signed_frequency(int index, int n) { return index <= n / 2 ? index : index - n; }

RVec Grid::frequency(std::size_t flat) const {
  auto idx = multi_index(flat);
  RVec k(dim_);
  for (int a = 0; a < dim_; ++a) k[a] = signed_frequency(idx[a], n_);
  return k;
}

SampledField::SampledField(Grid grid, int components)
    : grid_(grid), components_(components), values_(grid.size() * components) {
  if (components < 1) throw std::invalid_argument("field needs at least one component");
}

SampledField::SampledField(Grid grid, int components, std::vector<cplx> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  if (components < 1) throw std::invalid_argument("field needs at least one component");
  if (values_.size() != grid_.size() * components)
    throw std::invalid_argument("value array length must equal n^d * N");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
      throw std::invalid_argument("non-finite field entry at flat index " + std::to_string(i));
}

CVec SampledField::at(std::size_t point) const {
  return Eigen::Map<const CVec>(values_.data() + point * components_, components_);
}

void SampledField::set(std::size_t point, const CVec& value) {
  if (value.size() != components_) throw std::invalid_argument("component count mismatch");
  for (int c = 0; c < components_; ++c) values_[point * components_ + c] = value[c];
}

namespace {
void require_same_shape(const SampledField& a, const SampledField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw std::invalid_argument("fields differ in grid or component count");
}
}  // namespace

SampledField& SampledField::operator+=(const SampledField& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SampledField& SampledField::operator-=(const SampledField& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SampledField& SampledField::operator*=(cplx scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

SampledField operator+(SampledField a, const SampledField& b) { return a += b; }
SampledField operator-(SampledField a, const SampledField& b) { return a -= b; }
SampledField operator*(cplx s, SampledField a) { return a *= s; }

SpectralField::SpectralField(Grid grid, int components, std::vector<cplx> coefficients)
    : grid_(grid), components_(components), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size() * components)
    throw std::invalid_argument("coefficient array length must equal n^d * N");
}

SampledField sample_field(const FieldFn& fn, const Grid& grid, int components) {
  SampledField field(grid, components);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RVec x = grid.point(i);
    CVec v = fn(x);
    if (v.size() != components)
      throw std::invalid_argument("sampled function returned wrong component count");
    if (!v.allFinite()) {
      std::string where;
      for (int a = 0; a < x.size(); ++a) where += (a ? "," : "") + format_real(x[a]);
      throw std::invalid_argument("non-finite sample at x=(" + where + ")");
    }
    field.set(i, v);
  }
  return field;
}

cplx integrate(const SampledField& field) {
  if (field.components() != 1)
    throw std::invalid_argument("integrate without weight needs a scalar field");
  cplx sum = 0;
  for (auto v : field.values()) sum += v;
  return sum * field.grid().cell_volume();
}

cplx integrate(const SampledField& field, const std::function<cplx(const CVec&)>& weight) {
  cplx sum = 0;
  for (std::size_t i = 0; i < field.points(); ++i) sum += weight(field.at(i));
  return sum * field.grid().cell_volume();
}

cplx inner(const SampledField& a, const SampledField& b) {
  require_same_shape(a, b);
  cplx sum = 0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) sum += va[i] * std::conj(vb[i]);
  return sum * a.grid().cell_volume();
}

namespace {

// FFTW planning is not thread-safe; plans are cached per shape and executed
// on fresh aligned buffers through the new-array interface.
struct PlanKey {
  int dim, n, components, sign;
  auto operator<=>(const PlanKey&) const = default;
};

struct PlanCache {
  std::mutex mutex;
  std::map<PlanKey, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t count) : data(fftw_alloc_complex(count)), size(count) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

fftw_plan get_plan(const Grid& grid, int components, int sign) {
  auto& cache = plan_cache();
  std::lock_guard lock(cache.mutex);
  PlanKey key{grid.dim(), grid.n(), components, sign};
  if (auto it = cache.plans.find(key); it != cache.plans.end()) return it->second;
  FftwBuffer scratch(grid.size() * components);
  std::array<int, 3> dims{grid.n(), grid.n(), grid.n()};
  fftw_plan plan = fftw_plan_many_dft(grid.dim(), dims.data(), components, scratch.data, nullptr,
                                      components, 1, scratch.data, nullptr, components, 1, sign,
                                      FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("FFTW planning failed");
  cache.plans.emplace(key, plan);
  return plan;
}

// Phase e^{-+ pi i k/n} per axis accounts for the half-cell sample offset.
std::vector<cplx> axis_phases(int n, int sign) {
  std::vector<cplx> ph(n);
  for (int i = 0; i < n; ++i) {
    double k = Grid::signed_frequency(i, n);
    ph[i] = std::polar(1.0, sign * M_PI * k / n);
  }
  return ph;
}

std::vector<cplx> transform(const Grid& grid, int components, std::span<const cplx> in, int sign) {
  const std::size_t total = grid.size() * components;
  FftwBuffer buf(total);
  auto* data = reinterpret_cast<cplx*>(buf.data);
  const auto phase = axis_phases(grid.n(), sign);
  auto point_phase = [&](std::size_t p) {
    auto idx = grid.multi_index(p);
    cplx ph = 1.0;
    for (int a = 0; a < grid.dim(); ++a) ph *= phase[idx[a]];
    return ph;
  };
  if (sign == FFTW_FORWARD) {
    std::copy(in.begin(), in.end(), data);
  } else {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      cplx ph = point_phase(p);
      for (int c = 0; c < components; ++c) data[p * components + c] = in[p * components + c] * ph;
    }
  }
  fftw_execute_dft(get_plan(grid, components, sign), buf.data, buf.data);
  std::vector<cplx> out(data, data + total);
  if (sign == FFTW_FORWARD) {
    const double scale = grid.cell_volume();
    for (std::size_t p = 0; p < grid.size(); ++p) {
      cplx ph = point_phase(p) * scale;
      for (int c = 0; c < components; ++c) out[p * components + c] *= ph;
    }
  }
  return out;
}

}  // namespace

SpectralField dft(const SampledField& field) {
  return SpectralField(field.grid(), field.components(),
                       transform(field.grid(), field.components(), field.values(), FFTW_FORWARD));
}

SampledField idft(const SpectralField& spectrum) {
  auto values = transform(spectrum.grid(), spectrum.components(), spectrum.coefficients(),
                          FFTW_BACKWARD);
  return SampledField(spectrum.grid(), spectrum.components(), std::move(values));
}

double lp_norm(const SampledField& field, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm needs p in (1,inf)");
  double sum = 0;
  for (std::size_t i = 0; i < field.points(); ++i) sum += std::pow(field.at(i).norm(), p);
  return std::pow(sum * field.grid().cell_volume(), 1.0 / p);
}

namespace {
void put_i32(std::ostream& out, std::int32_t v) {
  unsigned char b[4];
  auto u = static_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}
std::int32_t get_i32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated field header");
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return static_cast<std::int32_t>(u);
}
void put_f64(std::ostream& out, double v) {
  auto u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}
double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated field data");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}
}  // namespace

void write_binary(const SampledField& field, std::ostream& out) {
  put_i32(out, field.grid().dim());
  put_i32(out, field.grid().n());
  put_i32(out, field.components());
  for (auto v : field.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
}

SampledField read_binary(std::istream& in) {
  int d = get_i32(in);
  int n = get_i32(in);
  int comps = get_i32(in);
  Grid grid(d, n);
  std::vector<cplx> values(grid.size() * comps);
  for (auto& v : values) {
    double re = get_f64(in);
    double im = get_f64(in);
    v = {re, im};
  }
  return SampledField(grid, comps, std::move(values));
}

void write_csv(const SampledField& field, std::ostream& out) {
  const auto& g = field.grid();
  static const char* axes[] = {"i", "j", "k"};
  static const char* coords[] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) out << axes[a] << ',';
  for (int a = 0; a < g.dim(); ++a) out << coords[a] << ',';
  for (int c = 0; c < field.components(); ++c)
    out << "re" << c << ",im" << c << (c + 1 < field.components() ? "," : "\n");
  for (std::size_t p = 0; p < field.points(); ++p) {
    auto idx = g.multi_index(p);
    RVec x = g.point(p);
    for (int a = 0; a < g.dim(); ++a) out << idx[a] << ',';
    for (int a = 0; a < g.dim(); ++a) out << format_real(x[a]) << ',';
    for (int c = 0; c < field.components(); ++c) {
      cplx v = field(p, c);
      out << format_real(v.real()) << ',' << format_real(v.imag())
          << (c + 1 < field.components() ? "," : "\n");
    }
  }
}

}  // namespace mcf
