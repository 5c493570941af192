#include "pcbody/sim/arm.h"

#include <stdexcept>
#include <string>

namespace pcbody::sim {

void ArmModel::Validate() const {
  if (!(link_lengths.array() > 0.0).all()) throw std::invalid_argument("link lengths must be positive");
  for (const auto& l : limits) {
    if (!(l.min < l.max)) throw std::invalid_argument("joint limits must satisfy min < max");
  }
}

bool ArmModel::WithinLimits(const Eigen::Vector3d& q) const {
  for (int j = 0; j < 3; ++j) {
    if (!std::isfinite(q[j]) || q[j] < limits[j].min || q[j] > limits[j].max) return false;
  }
  return true;
}

Eigen::Vector3d ArmModel::ForwardKinematics(const Eigen::Vector3d& q) const {
  if (!WithinLimits(q)) {
    throw std::invalid_argument("joint configuration outside limits: [" + std::to_string(q[0]) +
                                ", " + std::to_string(q[1]) + ", " + std::to_string(q[2]) + "]");
  }
  static const Eigen::Vector3d kAxes[3] = {Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitY(),
                                           Eigen::Vector3d::UnitY()};
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (int j = 0; j < 3; ++j) {
    R = R * Eigen::AngleAxisd(q[j], kAxes[j]).toRotationMatrix();
    p += R * Eigen::Vector3d(link_lengths[j], 0.0, 0.0);
  }
  return base_pose * p;
}

}  // namespace pcbody::sim
