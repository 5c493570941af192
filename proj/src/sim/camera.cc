#include "pcbody/sim/camera.h"

#include <stdexcept>

namespace pcbody::sim {

CameraModel CameraModel::LookAt(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                                double focal, const Eigen::Vector3d& up) {
  const Eigen::Vector3d forward = (target - eye).normalized();
  const Eigen::Vector3d right = forward.cross(up);
  if (right.norm() < 1e-9) throw std::invalid_argument("camera up vector is parallel to view");
  const Eigen::Vector3d r = right.normalized();
  const Eigen::Vector3d down = forward.cross(r);
  CameraModel cam;
  cam.fx = focal;
  cam.fy = focal;
  cam.position = eye;
  cam.rotation.row(0) = r.transpose();
  cam.rotation.row(1) = down.transpose();
  cam.rotation.row(2) = forward.transpose();
  return cam;
}

std::optional<Eigen::Vector2d> CameraModel::Project(const Eigen::Vector3d& world) const {
  const Eigen::Vector3d c = rotation * (world - position);
  if (c.z() <= 1e-9) return std::nullopt;
  const Eigen::Vector2d px(cx + fx * c.x() / c.z(), cy + fy * c.y() / c.z());
  if (!InFrame(px)) return std::nullopt;
  return px;
}

bool CameraModel::InFrame(const Eigen::Vector2d& pixel) const {
  return pixel.x() >= 0.0 && pixel.x() < width && pixel.y() >= 0.0 && pixel.y() < height;
}

Eigen::Vector3d WorkspaceCenter() { return Eigen::Vector3d(-0.6, -0.5, 0.75); }

Scene DefaultScene() {
  Scene scene;
  const Eigen::Vector3d target = scene.arm.ForwardKinematics(WorkspaceCenter());
  scene.camera = CameraModel::LookAt(Eigen::Vector3d(-0.6, 0.6, 0.9), target, 1050.0);
  return scene;
}

}  // namespace pcbody::sim
