#include "pnmdi/optics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "index_split.hpp"
#include "pnmdi/errors.hpp"

namespace pnmdi {

double transmissivity(double distance_km, double loss_db_per_km) {
  if (!(distance_km >= 0.0)) throw DomainError("distance must be nonnegative");
  return std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
}

ChannelParams ChannelParams::symmetric(double distance_km, double loss_db_per_km) {
  const double link = std::sqrt(transmissivity(distance_km, loss_db_per_km));
  return ChannelParams{link, link, distance_km, loss_db_per_km};
}

ChannelParams ChannelParams::from_total(double tau_total) {
  if (!(tau_total >= 0.0 && tau_total <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  const double link = std::sqrt(tau_total);
  const double d = tau_total > 0.0 ? -10.0 * std::log10(tau_total) / kDefaultLossDbPerKm : INFINITY;
  return ChannelParams{link, link, d, kDefaultLossDbPerKm};
}

void ChannelParams::validate() const {
  if (!(tau_a >= 0.0 && tau_a <= 1.0) || !(tau_b >= 0.0 && tau_b <= 1.0)) {
    throw DomainError("link transmissivities must lie in [0, 1]");
  }
}

double DetectorParams::thermal_mean() const {
  if (efficiency >= 1.0) return 0.0;
  return dark_count / (1.0 - efficiency);
}

void DetectorParams::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("detector efficiency must lie in [0, 1]");
  if (!(dark_count >= 0.0)) throw DomainError("dark count must be nonnegative");
  if (efficiency == 1.0 && dark_count != 0.0) {
    throw DomainError("a unit-efficiency detector cannot carry dark counts in this model");
  }
  if (thermal_cutoff < 1) throw DomainError("thermal cutoff must be at least 1");
}

// beamsplitter ---------------------------------------------------------------

namespace {

Matrix compute_beamsplitter(double tau, std::size_t dim_a, std::size_t dim_b) {
  const double theta = std::acos(std::sqrt(tau));
  const auto n = static_cast<Eigen::Index>(dim_a * dim_b);
  Matrix u = Matrix::Zero(n, n);
  const std::size_t max_total = (dim_a - 1) + (dim_b - 1);
  for (std::size_t total = 0; total <= max_total; ++total) {
    // sector basis: (na, total - na) that fit under both cutoffs, ordered by na
    std::vector<std::size_t> na_list;
    for (std::size_t na = 0; na <= total; ++na) {
      if (na < dim_a && total - na < dim_b) na_list.push_back(na);
    }
    const auto k = static_cast<Eigen::Index>(na_list.size());
    // i * G is Hermitian; G = theta (a^dag b - a b^dag) couples na <-> na + 1
    Matrix ig = Matrix::Zero(k, k);
    for (Eigen::Index s = 0; s + 1 < k; ++s) {
      const double na = static_cast<double>(na_list[static_cast<std::size_t>(s)]);
      const double nb = static_cast<double>(total) - na;
      const double g = theta * std::sqrt((na + 1.0) * nb);  // <na+1, nb-1| a^dag b |na, nb>
      ig(s + 1, s) = Complex(0.0, g);
      ig(s, s + 1) = Complex(0.0, -g);
    }
    Matrix block;
    if (k == 1) {
      block = Matrix::Identity(1, 1);
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(ig);
      const auto& vals = solver.eigenvalues();
      Vector phases(k);
      for (Eigen::Index i = 0; i < k; ++i) phases(i) = std::exp(Complex(0.0, -vals(i)));
      block = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    }
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto na_r = na_list[static_cast<std::size_t>(r)];
      const auto row = static_cast<Eigen::Index>(na_r * dim_b + (total - na_r));
      for (Eigen::Index c = 0; c < k; ++c) {
        const auto na_c = na_list[static_cast<std::size_t>(c)];
        u(row, static_cast<Eigen::Index>(na_c * dim_b + (total - na_c))) = block(r, c);
      }
    }
  }
  return u;
}

}  // namespace

Matrix beamsplitter_unitary(double tau, std::size_t dim_a, std::size_t dim_b) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  if (dim_a < 1 || dim_b < 1) throw DomainError("mode dimension must be at least 1");

  using Key = std::tuple<double, std::size_t, std::size_t>;
  static std::shared_mutex mutex;
  static std::map<Key, Matrix> cache;
  const Key key{tau, dim_a, dim_b};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Matrix u = compute_beamsplitter(tau, dim_a, dim_b);
  std::unique_lock lock(mutex);
  if (cache.size() > 4096) cache.clear();
  return cache.emplace(key, std::move(u)).first->second;
}

// single-mode channels ---------------------------------------------------------

namespace {

// Applies sum_k K rho K^dag with every K (out_dim x in_dim) acting on `mode`.
DensityOperator kraus_on_mode(const DensityOperator& rho, const std::vector<Matrix>& kraus, std::size_t mode) {
  const auto& dims = rho.dims();
  if (mode >= dims.modes()) throw DomainError("mode index out of range");
  const std::size_t d_in = dims[mode];
  const std::size_t d_out = static_cast<std::size_t>(kraus.front().rows());

  std::vector<std::size_t> out_dims = dims.values();
  out_dims[mode] = d_out;
  const ModeList target{mode};
  const auto in_split = detail::split_indices(dims.values(), target);
  const auto out_split = detail::split_indices(out_dims, target);
  const std::size_t rest = in_split.rest_size;

  // block view: rho_perm[(i, r), (j, r')]
  Matrix perm(static_cast<Eigen::Index>(d_in * rest), static_cast<Eigen::Index>(d_in * rest));
  std::vector<std::size_t> in_pos(in_split.target.size());
  for (std::size_t f = 0; f < in_pos.size(); ++f) in_pos[f] = in_split.target[f] * rest + in_split.rest[f];
  const auto& m = rho.matrix();
  for (std::size_t f = 0; f < in_pos.size(); ++f) {
    for (std::size_t g = 0; g < in_pos.size(); ++g) {
      perm(static_cast<Eigen::Index>(in_pos[f]), static_cast<Eigen::Index>(in_pos[g])) =
          m(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g));
    }
  }

  const auto R = static_cast<Eigen::Index>(rest);
  Matrix out_perm = Matrix::Zero(static_cast<Eigen::Index>(d_out * rest), static_cast<Eigen::Index>(d_out * rest));
  for (const auto& k : kraus) {
    for (Eigen::Index o = 0; o < static_cast<Eigen::Index>(d_out); ++o) {
      for (Eigen::Index p = 0; p < static_cast<Eigen::Index>(d_out); ++p) {
        auto block = out_perm.block(o * R, p * R, R, R);
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d_in); ++i) {
          if (k(o, i) == Complex{}) continue;
          for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d_in); ++j) {
            const Complex c = k(o, i) * std::conj(k(p, j));
            if (c == Complex{}) continue;
            block += c * perm.block(i * R, j * R, R, R);
          }
        }
      }
    }
  }

  const ModeDims od(out_dims);
  Matrix out(static_cast<Eigen::Index>(od.total()), static_cast<Eigen::Index>(od.total()));
  std::vector<std::size_t> out_pos(out_split.target.size());
  for (std::size_t f = 0; f < out_pos.size(); ++f) out_pos[f] = out_split.target[f] * rest + out_split.rest[f];
  for (std::size_t f = 0; f < out_pos.size(); ++f) {
    for (std::size_t g = 0; g < out_pos.size(); ++g) {
      out(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g)) =
          out_perm(static_cast<Eigen::Index>(out_pos[f]), static_cast<Eigen::Index>(out_pos[g]));
    }
  }
  return DensityOperator(od, std::move(out));
}

// K_e = <e|_env U |0>_env for a system of dimension d.
std::vector<Matrix> loss_kraus(double tau, std::size_t d) {
  const Matrix u = beamsplitter_unitary(tau, d, d);
  std::vector<Matrix> kraus;
  for (std::size_t e = 0; e < d; ++e) {
    Matrix k(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t o = 0; o < d; ++o) {
      for (std::size_t i = 0; i < d; ++i) {
        k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
            u(static_cast<Eigen::Index>(o * d + e), static_cast<Eigen::Index>(i * d));
      }
    }
    kraus.push_back(std::move(k));
  }
  return kraus;
}

// Kraus operators of the detector front end, input d -> output d + cutoff.
std::vector<Matrix> detector_kraus(std::size_t d, const DetectorParams& det) {
  det.validate();
  const std::size_t dout = d + det.thermal_cutoff;
  const auto thermal = thermal_state(det.thermal_mean(), det.thermal_cutoff);
  const Matrix u = beamsplitter_unitary(det.efficiency, dout, dout);
  std::vector<Matrix> kraus;
  for (std::size_t n = 0; n <= det.thermal_cutoff; ++n) {
    const double pn = thermal.rho.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real();
    if (pn <= 0.0) continue;
    const double amp = std::sqrt(pn);
    for (std::size_t e = 0; e < dout; ++e) {
      Matrix k(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(d));
      for (std::size_t o = 0; o < dout; ++o) {
        for (std::size_t i = 0; i < d; ++i) {
          k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
              amp * u(static_cast<Eigen::Index>(o * dout + e), static_cast<Eigen::Index>(i * dout + n));
        }
      }
      if (k.cwiseAbs().maxCoeff() > 0.0) kraus.push_back(std::move(k));
    }
  }
  return kraus;
}

}  // namespace

DensityOperator lossy_channel_kraus(const DensityOperator& rho, double tau, std::size_t mode) {
  if (mode >= rho.dims().modes()) throw DomainError("mode index out of range");
  return kraus_on_mode(rho, loss_kraus(tau, rho.dims()[mode]), mode);
}

FockVector lossy_channel_purified(const FockVector& psi, double tau, std::size_t mode) {
  if (mode >= psi.dims.modes()) throw DomainError("mode index out of range");
  const std::size_t d = psi.dims[mode];
  const FockVector vacuum = fock_basis_vector(ModeDims{d}, {0});
  const FockVector joint = tensor(psi, vacuum);
  const ModeList modes{mode, psi.dims.modes()};
  return apply_operator(joint, beamsplitter_unitary(tau, d, d), modes);
}

ThermalState thermal_state(double n_bar, std::size_t cutoff) {
  if (!(n_bar >= 0.0)) throw DomainError("mean photon number must be nonnegative");
  const double ratio = n_bar / (1.0 + n_bar);
  const double defect = std::pow(ratio, static_cast<double>(cutoff + 1));
  if (defect > kThermalDefectLimit) {
    throw CutoffError("thermal cutoff too small for the requested mean photon number");
  }
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(cutoff + 1), static_cast<Eigen::Index>(cutoff + 1));
  double p = 1.0 / (1.0 + n_bar);
  double sum = 0.0;
  for (std::size_t n = 0; n <= cutoff; ++n) {
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = p;
    sum += p;
    p *= ratio;
  }
  m /= sum;
  return {DensityOperator(ModeDims{cutoff + 1}, std::move(m)), defect};
}

DensityOperator noisy_detection_transform(const DensityOperator& rho, std::size_t mode, const DetectorParams& det) {
  if (mode >= rho.dims().modes()) throw DomainError("mode index out of range");
  return kraus_on_mode(rho, detector_kraus(rho.dims()[mode], det), mode);
}

Matrix noisy_detection_effect(std::size_t count, std::size_t input_dim, const DetectorParams& det) {
  const auto kraus = detector_kraus(input_dim, det);
  const auto d = static_cast<Eigen::Index>(input_dim);
  Matrix e = Matrix::Zero(d, d);
  if (count >= input_dim + det.thermal_cutoff) return e;
  for (const auto& k : kraus) {
    const Eigen::RowVectorXcd row = k.row(static_cast<Eigen::Index>(count));
    e += row.adjoint() * row;
  }
  return e;
}

}  // namespace pnmdi
