#ifndef PCBODY_SIM_ARM_H_
#define PCBODY_SIM_ARM_H_

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <numbers>

namespace pcbody::sim {

struct JointLimits {
  double min = -std::numbers::pi;
  double max = std::numbers::pi;
};

// Three revolute joints: shoulder_1 about z, shoulder_2 and elbow about y.
// Every link points along the local x axis at zero angles.
struct ArmModel {
  Eigen::Vector3d link_lengths = Eigen::Vector3d(0.30, 0.25, 0.20);
  Eigen::Isometry3d base_pose = Eigen::Isometry3d::Identity();
  std::array<JointLimits, 3> limits{};

  void Validate() const;
  bool WithinLimits(const Eigen::Vector3d& q) const;

  // End-effector position in the world frame. Throws std::invalid_argument
  // when q is outside the joint limits or not finite.
  Eigen::Vector3d ForwardKinematics(const Eigen::Vector3d& q) const;
};

}  // namespace pcbody::sim

#endif  // PCBODY_SIM_ARM_H_
