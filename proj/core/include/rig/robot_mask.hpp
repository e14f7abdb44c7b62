#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace rig {

/// Robot subsets as bitmasks over ids 0..n-1 (n <= 64).
using RobotMask = std::uint64_t;

inline RobotMask full_mask(int n) {
  return n >= 64 ? ~RobotMask{0} : (RobotMask{1} << n) - 1;
}

inline bool mask_contains(RobotMask mask, int id) { return (mask >> id) & 1u; }

inline RobotMask mask_with(RobotMask mask, int id) { return mask | (RobotMask{1} << id); }

inline RobotMask mask_without(RobotMask mask, int id) { return mask & ~(RobotMask{1} << id); }

inline int mask_size(RobotMask mask) { return std::popcount(mask); }

inline std::vector<int> mask_ids(RobotMask mask) {
  std::vector<int> ids;
  while (mask != 0) {
    const int id = std::countr_zero(mask);
    ids.push_back(id);
    mask &= mask - 1;
  }
  return ids;
}

inline RobotMask mask_of(const std::vector<int>& ids) {
  RobotMask m = 0;
  for (int id : ids) m = mask_with(m, id);
  return m;
}

}  // namespace rig
