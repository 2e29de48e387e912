#pragma once

// Truncated Fock-space linear algebra. Multi-mode objects are stored densely
// with mixed-radix indexing, mode 0 most significant.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pnmdi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using ModeList = std::vector<std::size_t>;

/// Per-mode dimensions (local photon cutoff + 1).
class ModeDims {
 public:
  ModeDims() = default;
  explicit ModeDims(std::vector<std::size_t> dims);
  ModeDims(std::initializer_list<std::size_t> dims);

  std::size_t modes() const { return dims_.size(); }
  std::size_t operator[](std::size_t mode) const { return dims_.at(mode); }
  const std::vector<std::size_t>& values() const { return dims_; }
  std::size_t total() const;

  /// Mixed-radix index of an occupation tuple. Throws CutoffError when an
  /// occupation does not fit its mode.
  std::size_t index_of(std::span<const std::size_t> occupations) const;
  std::vector<std::size_t> occupations_of(std::size_t index) const;

  ModeDims concat(const ModeDims& other) const;
  ModeDims select(std::span<const std::size_t> modes) const;
  /// Modes not listed, in ascending order.
  ModeList complement(std::span<const std::size_t> modes) const;

  bool operator==(const ModeDims&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

/// Photon-number weights a_0..a_{n_max} on the probability simplex.
class CoefficientVector {
 public:
  /// Requires nonnegative entries summing to 1 within 1e-9.
  explicit CoefficientVector(std::vector<double> weights);
  CoefficientVector(std::initializer_list<double> weights)
      : CoefficientVector(std::vector<double>(weights)) {}

  /// Rescales nonnegative raw weights onto the simplex.
  static CoefficientVector normalized(std::vector<double> raw);

  std::size_t n_max() const { return weights_.size() - 1; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t n) const { return weights_.at(n); }
  const std::vector<double>& values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Pure multi-mode state (not necessarily normalized).
struct FockVector {
  FockVector(ModeDims dims, Vector amp);

  ModeDims dims;
  Vector amp;

  double norm_squared() const { return amp.squaredNorm(); }
  bool is_normalized(double tol = 1e-12) const;
};

/// Hermitian PSD operator; trace_norm is 1 for states and below 1 for the
/// subnormalized outputs of a measurement branch.
class DensityOperator {
 public:
  DensityOperator(ModeDims dims, Matrix mat);
  static DensityOperator from_pure(const FockVector& psi);

  const ModeDims& dims() const { return dims_; }
  const Matrix& matrix() const { return mat_; }
  double trace_norm() const { return trace_norm_; }
  bool is_normalized(double tol = 1e-10) const;

  /// Copy rescaled to unit trace. Throws DomainError for a zero-trace input.
  DensityOperator normalized() const;

  /// Hermiticity and positivity checks; throws NumericalIntegrityError.
  void validate(double tol = 1e-10) const;

 private:
  ModeDims dims_;
  Matrix mat_;
  double trace_norm_ = 0.0;
};

/// Joint probability table over labeled discrete axes (row-major).
class ProbTable {
 public:
  struct Axis {
    std::string label;
    std::size_t size;
  };

  ProbTable(std::vector<Axis> axes, std::vector<double> p);

  const std::vector<Axis>& axes() const { return axes_; }
  std::span<const double> values() const { return p_; }
  double at(std::span<const std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  double total() const;
  ProbTable marginal(std::span<const std::size_t> keep) const;
  ProbTable marginal(std::initializer_list<std::size_t> keep) const {
    return marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
  }
  ProbTable normalized() const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> p_;
};

// -- state construction -----------------------------------------------------

FockVector fock_basis_vector(const ModeDims& dims, std::span<const std::size_t> occupations);
FockVector fock_basis_vector(const ModeDims& dims, std::initializer_list<std::size_t> occupations);

/// sum_n sqrt(a_n) |n n>, two modes of dimension n_max + 1.
FockVector key_state(const CoefficientVector& coeffs);

/// Unnormalized photon-number weights (1 - g^2) g^(2n), n = 0..n_max.
std::vector<double> tmsv_weights(double gamma, std::size_t n_max);
/// N = sum of tmsv_weights: the probability a real TMSV source emits at most
/// n_max photons.
double tmsv_truncation_weight(double gamma, std::size_t n_max);
/// Renormalized truncated two-mode squeezed vacuum.
FockVector tmsv_truncated(double gamma, std::size_t n_max);

// -- products, traces, measurements ------------------------------------------

FockVector tensor(const FockVector& x, const FockVector& y);
DensityOperator tensor(const DensityOperator& x, const DensityOperator& y);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::initializer_list<std::size_t> keep);

/// Reduced operator of a pure state, computed as a Gram contraction over the
/// discarded modes (no full outer product is formed).
DensityOperator reduced_density(const FockVector& psi, std::span<const std::size_t> keep);
DensityOperator reduced_density(const FockVector& psi, std::initializer_list<std::size_t> keep);

/// Lifts an operator acting on `modes` (in that order) to the full space.
Matrix embed_operator(const Matrix& op, const ModeDims& dims, std::span<const std::size_t> modes);

/// (op on `modes`) |psi>.
FockVector apply_operator(const FockVector& psi, const Matrix& op, std::span<const std::size_t> modes);

struct MeasurementBranch {
  DensityOperator state;  // (op x I) rho (op x I)^dag, subnormalized
  double probability;
};

MeasurementBranch apply_measurement(const DensityOperator& rho, const Matrix& op,
                                    std::span<const std::size_t> modes);
MeasurementBranch apply_measurement(const DensityOperator& rho, const Matrix& op,
                                    std::initializer_list<std::size_t> modes);

/// <phi|_modes |psi>: contracts the listed modes against a bra and removes
/// them. Remaining modes keep their relative order.
FockVector project_modes(const FockVector& psi, const Vector& phi, std::span<const std::size_t> modes);

/// Tr_modes[(effect x I) |psi><psi|]: the unnormalized state left on the other
/// modes after a general POVM element fires on `modes`.
DensityOperator trace_with_effect(const FockVector& psi, const Matrix& effect,
                                  std::span<const std::size_t> modes);

// -- functionals -------------------------------------------------------------

inline constexpr double kEigenClamp = 1e-12;

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

/// -sum lambda log2 lambda; eigenvalues below kEigenClamp count as zero.
double von_neumann_entropy(const DensityOperator& rho);

double shannon_entropy(std::span<const double> p);
double shannon_entropy(const ProbTable& table);

/// Half the trace norm of the difference.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace pnmdi
