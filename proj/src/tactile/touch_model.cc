#include "pcbody/tactile/touch_model.h"

#include <stdexcept>

namespace pcbody::tactile {

double TouchLikelihood(const Eigen::VectorXd& x_hat, const TouchEvent& event,
                       const gp::GPModel& visual_model, const TouchParams& params) {
  if (!event.active) return 0.0;
  return TouchLikelihoodAt(visual_model.Predict(x_hat), event.o_v, event.delta, params);
}

Eigen::VectorXd TouchLikelihoodGradient(const Eigen::VectorXd& x_hat, const TouchEvent& event,
                                        const gp::GPModel& visual_model,
                                        const TouchParams& params) {
  if (!event.active) return Eigen::VectorXd::Zero(x_hat.size());
  const Eigen::VectorXd g_v = visual_model.Predict(x_hat);
  const double g_t = TouchLikelihoodAt(g_v, event.o_v, event.delta, params);
  const Eigen::MatrixXd J_v = visual_model.PredictGradient(x_hat);
  return g_t * (-2.0 * params.b1) * (J_v.transpose() * (g_v - event.o_v));
}

TouchForwardModel::TouchForwardModel(std::shared_ptr<const gp::GPModel> visual_model,
                                     TouchParams params)
    : visual_model_(std::move(visual_model)), params_(params) {
  if (!visual_model_) throw std::invalid_argument("touch model: null visual model");
  if (visual_model_->output_dim() != 2) {
    throw std::invalid_argument("touch model: visual model must predict 2 outputs");
  }
  params_.Validate();
}

Eigen::VectorXd TouchForwardModel::Context(const Eigen::Vector2d& o_v, double delta) {
  return Eigen::Vector3d(o_v.x(), o_v.y(), delta);
}

namespace {

TouchEvent EventFromContext(const Eigen::VectorXd& context) {
  TouchEvent ev;
  if (context.size() == 0) return ev;
  if (context.size() != 3) throw std::invalid_argument("touch context must be [o_u, o_v, delta]");
  ev.o_v = context.head<2>();
  ev.delta = context[2];
  ev.active = true;
  return ev;
}

}  // namespace

Eigen::VectorXd TouchForwardModel::Predict(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& context) const {
  Eigen::VectorXd out(1);
  out[0] = TouchLikelihood(x, EventFromContext(context), *visual_model_, params_);
  return out;
}

Eigen::MatrixXd TouchForwardModel::Jacobian(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& context) const {
  return TouchLikelihoodGradient(x, EventFromContext(context), *visual_model_, params_)
      .transpose();
}

}  // namespace pcbody::tactile
