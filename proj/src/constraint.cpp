#include "mcf/constraint.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace mcf {

DiffOperator::DiffOperator(int dim, int order, std::map<MultiIndex, RMat> coefficients,
                           std::string name)
    : dim_(dim), order_(order), name_(std::move(name)), coefficients_(std::move(coefficients)) {
  if (dim < 1 || order < 1) throw std::invalid_argument("operator needs dim >= 1 and order >= 1");
  if (coefficients_.empty()) throw std::invalid_argument("operator has no coefficients");
  bool nonzero = false;
  for (const auto& [alpha, A] : coefficients_) {
    if (static_cast<int>(alpha.size()) != dim)
      throw std::invalid_argument("multi-index length differs from dimension");
    int sum = 0;
    for (int a : alpha) {
      if (a < 0) throw std::invalid_argument("negative multi-index entry");
      sum += a;
    }
    if (sum != order) throw std::invalid_argument("multi-index order differs from operator order");
    if (l_ == 0) {
      l_ = static_cast<int>(A.rows());
      N_ = static_cast<int>(A.cols());
    } else if (A.rows() != l_ || A.cols() != N_) {
      throw std::invalid_argument("coefficient matrices differ in shape");
    }
    nonzero = nonzero || A.cwiseAbs().maxCoeff() > 0;
  }
  if (!nonzero) throw std::invalid_argument("operator has only zero coefficients");
}

DiffOperator DiffOperator::curl(int m, int dim) {
  const int N = m * dim;
  const int l = m * dim * dim;
  std::map<MultiIndex, RMat> coef;
  for (int a = 0; a < dim; ++a) {
    MultiIndex e(dim, 0);
    e[a] = 1;
    coef[e] = RMat::Zero(l, N);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        const int row = i * dim * dim + j * dim + k;
        MultiIndex ej(dim, 0), ek(dim, 0);
        ej[j] = 1;
        ek[k] = 1;
        coef[ej](row, i * dim + k) += 1.0;
        coef[ek](row, i * dim + j) -= 1.0;
      }
  return DiffOperator(dim, 1, std::move(coef), "curl");
}

DiffOperator DiffOperator::div(int dim) {
  std::map<MultiIndex, RMat> coef;
  for (int a = 0; a < dim; ++a) {
    MultiIndex e(dim, 0);
    e[a] = 1;
    RMat A = RMat::Zero(1, dim);
    A(0, a) = 1.0;
    coef[e] = A;
  }
  return DiffOperator(dim, 1, std::move(coef), "div");
}

DiffOperator DiffOperator::tartar() {
  RMat A1 = RMat::Zero(2, 4), A2 = RMat::Zero(2, 4);
  A1(0, 0) = 1;
  A2(0, 1) = 1;
  A1(1, 2) = 1;
  A2(1, 3) = 1;
  return DiffOperator(2, 1, {{{1, 0}, A1}, {{0, 1}, A2}}, "tartar");
}

DiffOperator DiffOperator::symgrad_annihilator(int dim) {
  DiffOperator op;
  op.dim_ = dim;
  op.order_ = 2;
  op.N_ = dim * dim;
  op.l_ = dim * dim;
  op.name_ = "symgrad-annihilator";
  op.homogeneous_ = [dim](const RVec& xi) -> CMat {
    CMat span(dim * dim, dim);
    for (int c = 0; c < dim; ++c) {
      RVec a = RVec::Zero(dim);
      a[c] = 1.0;
      span.col(c) = vec(0.5 * (outer(a, xi) + outer(xi, a)));
    }
    const CMat Q = Eigen::HouseholderQR<CMat>(span).householderQ() * CMat::Identity(dim * dim, dim);
    return CMat::Identity(dim * dim, dim * dim) - Q * Q.adjoint();
  };
  return op;
}

CMat DiffOperator::symbol(const RVec& xi, SymbolKind kind) const {
  if (xi.size() != dim_) throw std::invalid_argument("frequency dimension differs from operator");
  const double r = xi.norm();
  if (r == 0) {
    if (kind == SymbolKind::Bounded) return CMat::Zero(l_, N_);
    throw std::invalid_argument("symbol undefined at xi = 0");
  }
  CMat full;
  if (homogeneous_) {
    const CMat h = homogeneous_(xi / r);
    if (kind == SymbolKind::Homogeneous) return h;
    full = std::pow(2 * M_PI * r, order_) * h;
  } else {
    full = CMat::Zero(l_, N_);
    const cplx twopii(0, 2 * M_PI);
    for (const auto& [alpha, A] : coefficients_) {
      cplx m = 1;
      for (int a = 0; a < dim_; ++a) m *= std::pow(twopii * xi[a], alpha[a]);
      full += m * A.cast<cplx>();
    }
    if (kind == SymbolKind::Homogeneous) return full / std::pow(2 * M_PI * r, order_);
  }
  if (kind == SymbolKind::Full) return full;
  return full / std::pow(1 + 4 * M_PI * M_PI * r * r, order_ / 2.0);
}

CMat eval_symbol(const DiffOperator& op, const RVec& xi, SymbolKind kind) { return op.symbol(xi, kind); }

CMat kernel_basis(const DiffOperator& op, const RVec& xi, double tol) {
  const CMat A0 = op.symbol(xi, SymbolKind::Homogeneous);
  Eigen::JacobiSVD<CMat> svd(A0, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // Floor of 1 keeps symbols that vanish entirely at xi (scalar d_1 at e2) from passing as injective.
  const double smax = std::max(1.0, s.size() ? s.maxCoeff() : 0.0);
  std::vector<int> cols;
  for (int i = 0; i < op.N(); ++i)
    if (i >= s.size() || s[i] <= tol * smax) cols.push_back(i);
  CMat K(op.N(), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) K.col(c) = svd.matrixV().col(cols[c]);
  return K;
}

std::vector<RVec> sphere_grid(int dim, int samples) {
  std::vector<RVec> out;
  if (dim == 1) {
    out = {RVec::Constant(1, 1.0), RVec::Constant(1, -1.0)};
  } else if (dim == 2) {
    if (samples < 1) throw std::invalid_argument("sphere grid needs samples >= 1");
    for (int a = 0; a < samples; ++a) {
      RVec x(2);
      x << std::cos(2 * M_PI * a / samples), std::sin(2 * M_PI * a / samples);
      out.push_back(x);
    }
  } else if (dim == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int a = 0; a < samples; ++a) {
      const double z = 1.0 - 2.0 * (a + 0.5) / samples;
      const double r = std::sqrt(1 - z * z);
      RVec x(3);
      x << r * std::cos(golden * a), r * std::sin(golden * a), z;
      out.push_back(x);
    }
  } else {
    throw std::invalid_argument("sphere grids exist for d = 1, 2, 3");
  }
  return out;
}

RankProfile constant_rank_check(const DiffOperator& op, int sphere_samples) {
  if (op.dim() >= 2 && sphere_samples < 16)
    throw std::invalid_argument("constant-rank check needs at least 16 sphere samples");
  RankProfile out;
  out.directions = sphere_grid(op.dim(), sphere_samples);
  for (const auto& xi : out.directions) {
    out.kernel_dims.push_back(static_cast<int>(kernel_basis(op, xi).cols()));
    out.constant = out.constant && out.kernel_dims.back() == out.kernel_dims.front();
  }
  return out;
}

MultiplierSymbol compose_with_operator(const MultiplierSymbol& psi, const DiffOperator& op) {
  if (psi.cols() != op.l()) throw std::invalid_argument("symbol columns must equal operator rows");
  return MultiplierSymbol(
      psi.rows(), op.N(),
      [psi, op](const RVec& xi) -> CMat { return psi(xi) * op.symbol(xi, SymbolKind::Homogeneous); },
      psi.name() + "*A0[" + op.name() + "]");
}

double afree_residual(const TestIntegrand& f, const MultiplierSymbol& psi, const SequenceGenerator& gen,
                      const DiffOperator& op, const LimitParams& params) {
  if (gen.N() != op.N() || gen.dim() != op.dim())
    throw std::invalid_argument("sequence and operator dimensions differ");
  return std::abs(pairing_limit(f, compose_with_operator(psi, op), gen, params).value);
}

SampledField apply_bounded_operator(const DiffOperator& op, const SampledField& u) {
  if (u.components() != op.N() || u.grid().dim() != op.dim())
    throw std::invalid_argument("field and operator dimensions differ");
  return apply_lattice_symbol([&op](const RVec& k) { return op.symbol(k, SymbolKind::Bounded); },
                              op.l(), u);
}

ConverseStat afree_converse_stat(const SequenceGenerator& gen, const DiffOperator& op,
                                 const LimitParams& params) {
  if (gen.N() != op.N() || gen.dim() != op.dim())
    throw std::invalid_argument("sequence and operator dimensions differ");
  if (gen.p() != 2.0) throw std::invalid_argument("converse statistic is defined for p = 2");
  const auto AstarA = MultiplierSymbol(
      op.N(), op.N(),
      [op](const RVec& xi) -> CMat {
        const CMat A0 = op.symbol(xi, SymbolKind::Homogeneous);
        return A0.adjoint() * A0;
      },
      "A0*A0[" + op.name() + "]");
  ConverseStat out;
  out.mcf_stat = std::abs(pairing_limit(integrands::identity(2, op.N()), AstarA, gen, params).value);
  const SampledField Au = apply_bounded_operator(op, gen.emit(params.j_list.back(), params.grid));
  double sum = 0;
  for (const auto& v : Au.values()) sum += std::norm(v);
  out.seq_stat = std::sqrt(sum * params.grid.cell_volume());
  return out;
}

double fluctuation_scale(const SequenceGenerator& gen, const Grid& grid, int j) {
  const SampledField d = gen.emit(j, grid) - gen.weak_limit(grid);
  double sum = 0;
  for (const auto& v : d.values()) sum += std::norm(v);
  return sum * grid.cell_volume();
}

std::optional<RankOne> rank_one_test(const RMat& A, const RMat& B, double tol) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("matrix shapes differ");
  const RMat D = B - A;
  Eigen::JacobiSVD<RMat> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
  if (s.size() == 0 || s[0] <= tol * scale) {
    RVec n0 = RVec::Zero(A.cols());
    n0[0] = 1.0;
    return RankOne{RVec::Zero(A.rows()), n0, true};
  }
  if (s.size() > 1 && s[1] > tol * s[0]) return std::nullopt;
  RVec n0 = svd.matrixV().col(0);
  RVec c = s[0] * svd.matrixU().col(0);
  Eigen::Index big;
  n0.cwiseAbs().maxCoeff(&big);
  if (n0[big] < 0) {
    n0 = -n0;
    c = -c;
  }
  return RankOne{c, n0, false};
}

std::vector<RVec> XiSet::members() const {
  std::vector<RVec> out;
  for (std::size_t i = 0; i < directions.size(); ++i)
    if (member[i]) out.push_back(directions[i]);
  return out;
}

XiSet xi_set(const std::vector<CVec>& Z_basis, const DiffOperator& op, const std::vector<RVec>& sphere) {
  if (Z_basis.empty()) throw std::invalid_argument("Z basis must not be empty");
  CMat Z(op.N(), static_cast<int>(Z_basis.size()));
  for (std::size_t c = 0; c < Z_basis.size(); ++c) {
    if (Z_basis[c].size() != op.N()) throw std::invalid_argument("Z basis vector has wrong length");
    Z.col(c) = Z_basis[c];
  }
  Eigen::JacobiSVD<CMat> zsvd(Z, Eigen::ComputeThinU);
  const auto& zs = zsvd.singularValues();
  if (zs[zs.size() - 1] <= 1e-10 * zs[0]) throw std::invalid_argument("Z basis is linearly dependent");
  const CMat QZ = zsvd.matrixU();

  XiSet out;
  out.directions = sphere;
  for (const auto& xi : sphere) {
    const CMat K = kernel_basis(op, xi);
    double cosine = 0;
    if (K.cols() > 0) {
      const CMat P = QZ.adjoint() * K;
      cosine = Eigen::JacobiSVD<CMat>(P).singularValues()[0];
    }
    out.cosines.push_back(cosine);
    out.member.push_back(cosine > 1 - 1e-8);
  }
  return out;
}

CVec vec(const RMat& M) {
  CVec v(M.size());
  for (int i = 0; i < M.rows(); ++i)
    for (int k = 0; k < M.cols(); ++k) v[i * M.cols() + k] = M(i, k);
  return v;
}

RMat outer(const RVec& a, const RVec& b) { return a * b.transpose(); }

}  // namespace mcf
