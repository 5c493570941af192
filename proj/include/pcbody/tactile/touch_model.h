#ifndef PCBODY_TACTILE_TOUCH_MODEL_H_
#define PCBODY_TACTILE_TOUCH_MODEL_H_

#include <Eigen/Dense>
#include <memory>

#include "pcbody/estimator/forward_model.h"
#include "pcbody/gp/gaussian_process.h"
#include "pcbody/tactile/visuo_tactile.h"

namespace pcbody::tactile {

// g_t(x_hat) for an event; 0 for inactive events. o_v must be in the visual
// model's output units.
double TouchLikelihood(const Eigen::VectorXd& x_hat, const TouchEvent& event,
                       const gp::GPModel& visual_model, const TouchParams& params);

// g_t(x_hat) (-2 b1) (g_v(x_hat) - o_v)^T J_v(x_hat); zero for inactive events.
Eigen::VectorXd TouchLikelihoodGradient(const Eigen::VectorXd& x_hat, const TouchEvent& event,
                                        const gp::GPModel& visual_model,
                                        const TouchParams& params);

// Tactile channel forward model. The per-frame context is [o_v(0), o_v(1), delta];
// an empty context means no touch and predicts 0.
class TouchForwardModel : public estimator::ForwardModel {
 public:
  TouchForwardModel(std::shared_ptr<const gp::GPModel> visual_model, TouchParams params);

  int input_dim() const override { return visual_model_->input_dim(); }
  int output_dim() const override { return 1; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd& context) const override;
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& context) const override;

  static Eigen::VectorXd Context(const Eigen::Vector2d& o_v, double delta);

 private:
  std::shared_ptr<const gp::GPModel> visual_model_;
  TouchParams params_;
};

}  // namespace pcbody::tactile

#endif  // PCBODY_TACTILE_TOUCH_MODEL_H_
