#pragma once

#include <map>
#include <vector>

#include "rig/dynamics.hpp"
#include "rig/robot_mask.hpp"

namespace rig {

using ControlSequence = std::vector<ControlInput>;

/// Per-robot control sequences over the planning horizon, keyed by robot id.
struct PlanSet {
  std::map<int, ControlSequence> sequences;

  bool contains(int robot_id) const { return sequences.count(robot_id) != 0; }

  RobotMask robots() const {
    RobotMask m = 0;
    for (const auto& [id, seq] : sequences) m = mask_with(m, id);
    return m;
  }

  bool operator==(const PlanSet&) const = default;
};

}  // namespace rig
