#ifndef PCBODY_SIM_CAMERA_H_
#define PCBODY_SIM_CAMERA_H_

#include <Eigen/Dense>
#include <optional>

#include "pcbody/sim/arm.h"

namespace pcbody::sim {

// Pinhole camera. `rotation` maps world directions into camera axes
// (x right, y down, z forward).
struct CameraModel {
  double fx = 1050.0;
  double fy = 1050.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  // Camera at `eye` looking at `target`, image rows following -up.
  static CameraModel LookAt(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                            double focal, const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ());

  // Pixel coordinates (u, v); empty when the point is behind the camera or
  // lands outside the image.
  std::optional<Eigen::Vector2d> Project(const Eigen::Vector3d& world) const;
  bool InFrame(const Eigen::Vector2d& pixel) const;
};

// Centred, scaled pixel coordinates used by the visual channel:
// f = (pixel - center) / pixels_per_unit.
struct VisualFeatureMap {
  Eigen::Vector2d center = Eigen::Vector2d(320.0, 240.0);
  double pixels_per_unit = 100.0;

  Eigen::Vector2d ToFeatures(const Eigen::Vector2d& pixel) const {
    return (pixel - center) / pixels_per_unit;
  }
  Eigen::Vector2d ToPixels(const Eigen::Vector2d& features) const {
    return center + features * pixels_per_unit;
  }
};

struct Scene {
  ArmModel arm;
  CameraModel camera;
  VisualFeatureMap features;
};

// Joint configuration around which the workspace is centred.
Eigen::Vector3d WorkspaceCenter();

// Default arm and a camera framing the workspace around WorkspaceCenter().
Scene DefaultScene();

}  // namespace pcbody::sim

#endif  // PCBODY_SIM_CAMERA_H_
