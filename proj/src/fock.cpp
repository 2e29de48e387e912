#include "pnmdi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "index_split.hpp"
#include "pnmdi/errors.hpp"

namespace pnmdi {

// ModeDims ------------------------------------------------------------------

ModeDims::ModeDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d < 1) throw DomainError("mode dimension must be at least 1");
  }
}

ModeDims::ModeDims(std::initializer_list<std::size_t> dims)
    : ModeDims(std::vector<std::size_t>(dims)) {}

std::size_t ModeDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t ModeDims::index_of(std::span<const std::size_t> occupations) const {
  if (occupations.size() != dims_.size()) {
    throw DomainError("occupation tuple length does not match the number of modes");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (occupations[i] >= dims_[i]) {
      std::ostringstream msg;
      msg << "occupation " << occupations[i] << " exceeds cutoff of mode " << i
          << " (dimension " << dims_[i] << ")";
      throw CutoffError(msg.str());
    }
    index = index * dims_[i] + occupations[i];
  }
  return index;
}

std::vector<std::size_t> ModeDims::occupations_of(std::size_t index) const {
  std::vector<std::size_t> occ(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    occ[i] = index % dims_[i];
    index /= dims_[i];
  }
  return occ;
}

ModeDims ModeDims::concat(const ModeDims& other) const {
  auto dims = dims_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  return ModeDims(std::move(dims));
}

ModeDims ModeDims::select(std::span<const std::size_t> modes) const {
  std::vector<std::size_t> dims;
  dims.reserve(modes.size());
  for (auto m : modes) dims.push_back(dims_.at(m));
  return ModeDims(std::move(dims));
}

ModeList ModeDims::complement(std::span<const std::size_t> modes) const {
  ModeList rest;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (std::find(modes.begin(), modes.end(), i) == modes.end()) rest.push_back(i);
  }
  return rest;
}

// CoefficientVector ------------------------------------------------------------

CoefficientVector::CoefficientVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("coefficient vector is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw DomainError("coefficients must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("coefficients must sum to 1");
}

CoefficientVector CoefficientVector::normalized(std::vector<double> raw) {
  double sum = 0.0;
  for (double w : raw) {
    if (!(w >= 0.0)) throw DomainError("coefficients must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("coefficients sum to zero");
  for (double& w : raw) w /= sum;
  return CoefficientVector(std::move(raw));
}

// FockVector / DensityOperator ------------------------------------------------

FockVector::FockVector(ModeDims d, Vector a) : dims(std::move(d)), amp(std::move(a)) {
  if (static_cast<std::size_t>(amp.size()) != dims.total()) {
    throw DomainError("amplitude length does not match mode dimensions");
  }
}

bool FockVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

DensityOperator::DensityOperator(ModeDims dims, Matrix mat) : dims_(std::move(dims)), mat_(std::move(mat)) {
  const auto n = static_cast<Eigen::Index>(dims_.total());
  if (mat_.rows() != n || mat_.cols() != n) {
    throw DomainError("operator size does not match mode dimensions");
  }
  trace_norm_ = mat_.trace().real();
}

DensityOperator DensityOperator::from_pure(const FockVector& psi) {
  return DensityOperator(psi.dims, psi.amp * psi.amp.adjoint());
}

bool DensityOperator::is_normalized(double tol) const { return std::abs(trace_norm_ - 1.0) <= tol; }

DensityOperator DensityOperator::normalized() const {
  if (!(trace_norm_ > 0.0)) throw DomainError("cannot normalize a zero-trace operator");
  return DensityOperator(dims_, mat_ / trace_norm_);
}

void DensityOperator::validate(double tol) const {
  const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw NumericalIntegrityError("density operator is not Hermitian");
  if (trace_norm_ < -tol || trace_norm_ > 1.0 + tol) {
    throw NumericalIntegrityError("density operator trace outside [0, 1]");
  }
  const auto ev = hermitian_eigenvalues(mat_);
  if (ev.size() > 0 && ev.minCoeff() < -tol) {
    throw NumericalIntegrityError("density operator has a negative eigenvalue");
  }
}

// ProbTable -------------------------------------------------------------------

ProbTable::ProbTable(std::vector<Axis> axes, std::vector<double> p) : axes_(std::move(axes)), p_(std::move(p)) {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.size;
  if (n != p_.size()) throw DomainError("probability table size does not match its axes");
  for (double v : p_) {
    if (v < 0.0) throw DomainError("probability table entries must be nonnegative");
  }
}

double ProbTable::at(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw DomainError("index rank does not match table rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (index[i] >= axes_[i].size) throw DomainError("table index out of range");
    flat = flat * axes_[i].size + index[i];
  }
  return p_[flat];
}

double ProbTable::total() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

ProbTable ProbTable::marginal(std::span<const std::size_t> keep) const {
  std::vector<std::size_t> sizes;
  std::vector<Axis> axes;
  for (auto k : keep) {
    axes.push_back(axes_.at(k));
    sizes.push_back(axes_.at(k).size);
  }
  std::vector<std::size_t> all;
  for (const auto& a : axes_) all.push_back(a.size);
  const auto split = detail::split_indices(all, keep);
  std::vector<double> out(split.target_size, 0.0);
  for (std::size_t f = 0; f < p_.size(); ++f) out[split.target[f]] += p_[f];
  return ProbTable(std::move(axes), std::move(out));
}

ProbTable ProbTable::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw DomainError("cannot normalize an empty probability table");
  auto p = p_;
  for (double& v : p) v /= t;
  return ProbTable(axes_, std::move(p));
}

// construction ----------------------------------------------------------------

FockVector fock_basis_vector(const ModeDims& dims, std::span<const std::size_t> occupations) {
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
  amp(static_cast<Eigen::Index>(dims.index_of(occupations))) = 1.0;
  return FockVector(dims, std::move(amp));
}

FockVector fock_basis_vector(const ModeDims& dims, std::initializer_list<std::size_t> occupations) {
  return fock_basis_vector(dims, std::span<const std::size_t>(occupations.begin(), occupations.size()));
}

FockVector key_state(const CoefficientVector& coeffs) {
  const std::size_t m = coeffs.size();
  ModeDims dims{m, m};
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(m * m));
  for (std::size_t n = 0; n < m; ++n) amp(static_cast<Eigen::Index>(n * m + n)) = std::sqrt(coeffs[n]);
  return FockVector(std::move(dims), std::move(amp));
}

std::vector<double> tmsv_weights(double gamma, std::size_t n_max) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("squeezing parameter must lie in [0, 1)");
  std::vector<double> w(n_max + 1);
  const double g2 = gamma * gamma;
  double pow = 1.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    w[n] = (1.0 - g2) * pow;
    pow *= g2;
  }
  return w;
}

double tmsv_truncation_weight(double gamma, std::size_t n_max) {
  const auto w = tmsv_weights(gamma, n_max);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

FockVector tmsv_truncated(double gamma, std::size_t n_max) {
  return key_state(CoefficientVector::normalized(tmsv_weights(gamma, n_max)));
}

// products and traces -----------------------------------------------------------

FockVector tensor(const FockVector& x, const FockVector& y) {
  Vector amp(x.amp.size() * y.amp.size());
  for (Eigen::Index i = 0; i < x.amp.size(); ++i) {
    amp.segment(i * y.amp.size(), y.amp.size()) = x.amp(i) * y.amp;
  }
  return FockVector(x.dims.concat(y.dims), std::move(amp));
}

DensityOperator tensor(const DensityOperator& x, const DensityOperator& y) {
  const auto& a = x.matrix();
  const auto& b = y.matrix();
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return DensityOperator(x.dims().concat(y.dims()), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("partial trace needs at least one kept mode");
  for (auto k : keep) {
    if (k >= rho.dims().modes()) throw DomainError("kept mode index out of range");
  }
  const auto split = detail::split_indices(rho.dims().values(), keep);
  // group full indices by their traced-out component
  std::vector<std::vector<std::size_t>> groups(split.rest_size);
  for (std::size_t f = 0; f < split.target.size(); ++f) groups[split.rest[f]].push_back(f);

  const auto& m = rho.matrix();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(split.target_size),
                            static_cast<Eigen::Index>(split.target_size));
  for (const auto& g : groups) {
    for (auto fi : g) {
      const auto ki = static_cast<Eigen::Index>(split.target[fi]);
      for (auto fj : g) {
        out(ki, static_cast<Eigen::Index>(split.target[fj])) +=
            m(static_cast<Eigen::Index>(fi), static_cast<Eigen::Index>(fj));
      }
    }
  }
  return DensityOperator(rho.dims().select(keep), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

DensityOperator reduced_density(const FockVector& psi, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("partial trace needs at least one kept mode");
  const auto split = detail::split_indices(psi.dims.values(), keep);
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(split.target_size),
                          static_cast<Eigen::Index>(split.rest_size));
  for (std::size_t f = 0; f < split.target.size(); ++f) {
    g(static_cast<Eigen::Index>(split.target[f]), static_cast<Eigen::Index>(split.rest[f])) =
        psi.amp(static_cast<Eigen::Index>(f));
  }
  return DensityOperator(psi.dims.select(keep), g * g.adjoint());
}

DensityOperator reduced_density(const FockVector& psi, std::initializer_list<std::size_t> keep) {
  return reduced_density(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

Matrix embed_operator(const Matrix& op, const ModeDims& dims, std::span<const std::size_t> modes) {
  const auto sub = dims.select(modes).total();
  if (static_cast<std::size_t>(op.rows()) != sub || static_cast<std::size_t>(op.cols()) != sub) {
    throw DomainError("operator dimension does not match the target modes");
  }
  const auto split = detail::split_indices(dims.values(), modes);
  const auto n = static_cast<Eigen::Index>(dims.total());
  // full index from (target, rest)
  std::vector<std::size_t> full(split.target_size * split.rest_size);
  for (std::size_t f = 0; f < split.target.size(); ++f) {
    full[split.target[f] * split.rest_size + split.rest[f]] = f;
  }
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t r = 0; r < split.rest_size; ++r) {
    for (std::size_t i = 0; i < split.target_size; ++i) {
      for (std::size_t j = 0; j < split.target_size; ++j) {
        const Complex v = op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v == Complex{}) continue;
        out(static_cast<Eigen::Index>(full[i * split.rest_size + r]),
            static_cast<Eigen::Index>(full[j * split.rest_size + r])) = v;
      }
    }
  }
  return out;
}

namespace {

// Reshape psi into a (target x rest) matrix.
Matrix as_matrix(const FockVector& psi, const detail::IndexSplit& split) {
  Matrix g(static_cast<Eigen::Index>(split.target_size), static_cast<Eigen::Index>(split.rest_size));
  for (std::size_t f = 0; f < split.target.size(); ++f) {
    g(static_cast<Eigen::Index>(split.target[f]), static_cast<Eigen::Index>(split.rest[f])) =
        psi.amp(static_cast<Eigen::Index>(f));
  }
  return g;
}

void check_op(const Matrix& op, const ModeDims& dims, std::span<const std::size_t> modes) {
  for (auto m : modes) {
    if (m >= dims.modes()) throw DomainError("target mode index out of range");
  }
  const auto sub = dims.select(modes).total();
  if (static_cast<std::size_t>(op.rows()) != sub || static_cast<std::size_t>(op.cols()) != sub) {
    throw DomainError("operator dimension does not match the target modes");
  }
}

}  // namespace

FockVector apply_operator(const FockVector& psi, const Matrix& op, std::span<const std::size_t> modes) {
  check_op(op, psi.dims, modes);
  const auto split = detail::split_indices(psi.dims.values(), modes);
  const Matrix out = op * as_matrix(psi, split);
  Vector amp(psi.amp.size());
  for (std::size_t f = 0; f < split.target.size(); ++f) {
    amp(static_cast<Eigen::Index>(f)) =
        out(static_cast<Eigen::Index>(split.target[f]), static_cast<Eigen::Index>(split.rest[f]));
  }
  return FockVector(psi.dims, std::move(amp));
}

MeasurementBranch apply_measurement(const DensityOperator& rho, const Matrix& op,
                                    std::span<const std::size_t> modes) {
  check_op(op, rho.dims(), modes);
  const Matrix full = embed_operator(op, rho.dims(), modes);
  DensityOperator out(rho.dims(), full * rho.matrix() * full.adjoint());
  const double p = out.trace_norm();
  return {std::move(out), p};
}

MeasurementBranch apply_measurement(const DensityOperator& rho, const Matrix& op,
                                    std::initializer_list<std::size_t> modes) {
  return apply_measurement(rho, op, std::span<const std::size_t>(modes.begin(), modes.size()));
}

FockVector project_modes(const FockVector& psi, const Vector& phi, std::span<const std::size_t> modes) {
  const auto sub = psi.dims.select(modes).total();
  if (static_cast<std::size_t>(phi.size()) != sub) {
    throw DomainError("bra dimension does not match the projected modes");
  }
  const auto split = detail::split_indices(psi.dims.values(), modes);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(split.rest_size));
  for (std::size_t f = 0; f < split.target.size(); ++f) {
    const Complex bra = std::conj(phi(static_cast<Eigen::Index>(split.target[f])));
    if (bra == Complex{}) continue;
    out(static_cast<Eigen::Index>(split.rest[f])) += bra * psi.amp(static_cast<Eigen::Index>(f));
  }
  return FockVector(psi.dims.select(psi.dims.complement(modes)), std::move(out));
}

DensityOperator trace_with_effect(const FockVector& psi, const Matrix& effect,
                                  std::span<const std::size_t> modes) {
  check_op(effect, psi.dims, modes);
  const auto split = detail::split_indices(psi.dims.values(), modes);
  const Matrix g = as_matrix(psi, split);  // target x rest
  // <r|rho|r'> = sum_{k,l} E_{lk} psi(k, r) conj(psi(l, r'))
  Matrix rest = g.transpose() * effect.transpose() * g.conjugate();
  return DensityOperator(psi.dims.select(psi.dims.complement(modes)), std::move(rest));
}

// functionals ----------------------------------------------------------------

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalIntegrityError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

double von_neumann_entropy(const DensityOperator& rho) {
  if (!rho.is_normalized()) throw DomainError("von Neumann entropy needs a unit-trace state");
  const auto ev = hermitian_eigenvalues(rho.matrix());
  double s = 0.0;
  for (double l : ev) {
    if (l > kEigenClamp) s -= l * std::log2(l);
  }
  return s;
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) throw DomainError("probabilities must be nonnegative");
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

double shannon_entropy(const ProbTable& table) { return shannon_entropy(table.values()); }

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.dims() == b.dims())) throw DomainError("trace distance between mismatched spaces");
  const auto ev = hermitian_eigenvalues(a.matrix() - b.matrix());
  return 0.5 * ev.cwiseAbs().sum();
}

}  // namespace pnmdi
