#pragma once

#include "rig/robot_mask.hpp"

namespace rig {

/// A real-valued function over subsets of a ground set of robots.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual int ground_size() const = 0;
  virtual double value(RobotMask subset) const = 0;
};

}  // namespace rig
