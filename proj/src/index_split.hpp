#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pnmdi::detail {

// For every full mixed-radix index, the index within the target modes (in the
// listed order) and within the remaining modes (ascending order).
struct IndexSplit {
  std::vector<std::size_t> target;
  std::vector<std::size_t> rest;
  std::size_t target_size = 1;
  std::size_t rest_size = 1;
};

inline IndexSplit split_indices(const std::vector<std::size_t>& dims, std::span<const std::size_t> target_modes) {
  const std::size_t n_modes = dims.size();
  std::vector<std::size_t> t_stride(n_modes, 0), r_stride(n_modes, 0);
  std::vector<bool> is_target(n_modes, false);
  for (auto m : target_modes) is_target.at(m) = true;

  IndexSplit s;
  for (std::size_t k = target_modes.size(); k-- > 0;) {
    t_stride[target_modes[k]] = s.target_size;
    s.target_size *= dims[target_modes[k]];
  }
  for (std::size_t i = n_modes; i-- > 0;) {
    if (is_target[i]) continue;
    r_stride[i] = s.rest_size;
    s.rest_size *= dims[i];
  }

  const std::size_t total = s.target_size * s.rest_size;
  s.target.resize(total);
  s.rest.resize(total);
  std::vector<std::size_t> occ(n_modes, 0);
  std::size_t t = 0, r = 0;
  for (std::size_t f = 0; f < total; ++f) {
    s.target[f] = t;
    s.rest[f] = r;
    // odometer increment, last mode fastest
    for (std::size_t i = n_modes; i-- > 0;) {
      const std::size_t stride = is_target[i] ? t_stride[i] : r_stride[i];
      std::size_t& acc = is_target[i] ? t : r;
      if (++occ[i] < dims[i]) {
        acc += stride;
        break;
      }
      acc -= stride * (dims[i] - 1);
      occ[i] = 0;
    }
  }
  return s;
}

}  // namespace pnmdi::detail
