// Constant-coefficient differential operators, their symbols and kernels,
// A-freeness statistics and the compensated-compactness direction set.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcf/pairing.hpp"

namespace mcf {

using MultiIndex = std::vector<int>;

enum class SymbolKind { Full, Homogeneous, Bounded };

class DiffOperator {
 public:
  /// Coefficients A^(alpha) in R^{l x N}, one per multi-index with |alpha| = order.
  DiffOperator(int dim, int order, std::map<MultiIndex, RMat> coefficients, std::string name);

  /// (Aw)_{ijk} = d_j w^i_k - d_k w^i_j for w: R^d -> R^{m x d}; w^i_k is component i*d + k.
  static DiffOperator curl(int m, int dim);
  static DiffOperator div(int dim);
  /// d1 u1 + d2 u2 = 0, d1 u3 + d2 u4 = 0 on R^2.
  static DiffOperator tartar();
  /// Second-order annihilator of symmetric gradients, given through its kernel family
  /// {a (.) xi}: the homogeneous symbol is the orthogonal projector onto the complement.
  static DiffOperator symgrad_annihilator(int dim);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int N() const { return N_; }
  int l() const { return l_; }
  const std::string& name() const { return name_; }
  const std::map<MultiIndex, RMat>& coefficients() const { return coefficients_; }

  CMat symbol(const RVec& xi, SymbolKind kind) const;

 private:
  DiffOperator() = default;
  int dim_ = 0;
  int order_ = 0;
  int N_ = 0;
  int l_ = 0;
  std::string name_;
  std::map<MultiIndex, RMat> coefficients_;
  std::function<CMat(const RVec& unit_xi)> homogeneous_;
};

CMat eval_symbol(const DiffOperator& op, const RVec& xi, SymbolKind kind);

/// Orthonormal columns spanning ker A_0(xi); singular values <= tol * max(1, sigma_max) count as zero.
CMat kernel_basis(const DiffOperator& op, const RVec& xi, double tol = 1e-10);

/// d = 1: {+1, -1}; d = 2: equally spaced angles starting at e1; d = 3: Fibonacci points.
std::vector<RVec> sphere_grid(int dim, int samples);

struct RankProfile {
  bool constant = true;
  std::vector<RVec> directions;
  std::vector<int> kernel_dims;
};

RankProfile constant_rank_check(const DiffOperator& op, int sphere_samples);

/// xi -> Psi(xi) A_0(xi) as an N x N multiplier symbol.
MultiplierSymbol compose_with_operator(const MultiplierSymbol& psi, const DiffOperator& op);

/// |pairing_limit(f, Psi A_0, gen)|.
double afree_residual(const TestIntegrand& f, const MultiplierSymbol& psi, const SequenceGenerator& gen,
                      const DiffOperator& op, const LimitParams& params);

struct ConverseStat {
  double mcf_stat;
  double seq_stat;
};

/// mcf_stat = |<<z.q (x) A_0^* A_0, omega>>|, seq_stat = ||A_b u_j||_2 at the largest j.
ConverseStat afree_converse_stat(const SequenceGenerator& gen, const DiffOperator& op,
                                 const LimitParams& params);

/// A_b applied on the frequency lattice.
SampledField apply_bounded_operator(const DiffOperator& op, const SampledField& u);

/// int |u_j - u|^2 at index j, the natural size of A-freeness statistics.
double fluctuation_scale(const SequenceGenerator& gen, const Grid& grid, int j);

struct RankOne {
  RVec c;
  RVec n0;
  bool degenerate = false;
};

/// Factorization B - A = c (x) n0 when rank(B - A) <= 1.
std::optional<RankOne> rank_one_test(const RMat& A, const RMat& B, double tol = 1e-10);

struct XiSet {
  std::vector<RVec> directions;
  std::vector<double> cosines;  // cosine of the smallest principal angle per direction
  std::vector<bool> member;
  std::vector<RVec> members() const;
};

XiSet xi_set(const std::vector<CVec>& Z_basis, const DiffOperator& op, const std::vector<RVec>& sphere);

/// Row-major vectorization of a matrix, matching the curl component layout.
CVec vec(const RMat& M);
RMat outer(const RVec& a, const RVec& b);

}  // namespace mcf
