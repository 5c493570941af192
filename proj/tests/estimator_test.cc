#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pcbody/common/csv.h"
#include "pcbody/estimator/body_estimator.h"
#include "pcbody/estimator/forward_model.h"
#include "pcbody/estimator/trajectory_log.h"
#include "test_util.h"

using namespace pcbody;
using namespace pcbody::estimator;

namespace {

// g(x) = A x + b.
class LinearModel : public ForwardModel {
 public:
  LinearModel(Eigen::MatrixXd A, Eigen::VectorXd b) : A_(std::move(A)), b_(std::move(b)) {}
  int input_dim() const override { return static_cast<int>(A_.cols()); }
  int output_dim() const override { return static_cast<int>(A_.rows()); }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override {
    return A_ * x + b_;
  }
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
    return A_;
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

// Predicts NaN whenever x[0] > threshold.
class FaultyModel : public ForwardModel {
 public:
  explicit FaultyModel(double threshold) : threshold_(threshold) {}
  int input_dim() const override { return 1; }
  int output_dim() const override { return 1; }
  Eigen::VectorXd Predict(const Eigen::VectorXd& x, const Eigen::VectorXd&) const override {
    return Eigen::VectorXd::Constant(1, x[0] > threshold_ ? std::nan("") : x[0]);
  }
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
    return Eigen::MatrixXd::Ones(1, 1);
  }

 private:
  double threshold_;
};

SensorChannel Proprio(int m, double variance = 1.0) {
  return {"p", Eigen::VectorXd::Constant(m, variance), std::make_shared<IdentityModel>(m)};
}

SensorChannel Linear(const std::string& id, Eigen::MatrixXd A, double variance) {
  const auto rows = A.rows();
  return {id, Eigen::VectorXd::Constant(rows, variance),
          std::make_shared<LinearModel>(std::move(A), Eigen::VectorXd::Zero(rows))};
}

SensorFrame Frame(double t, std::vector<Eigen::VectorXd> values) {
  SensorFrame f;
  f.t = t;
  for (auto& v : values) {
    SensorReading r;
    r.available = v.size() > 0;
    r.value = std::move(v);
    f.readings.push_back(std::move(r));
  }
  return f;
}

EstimatorConfig Config(int m) {
  EstimatorConfig cfg;
  cfg.sigma_x = Eigen::VectorXd::Ones(m);
  return cfg;
}

Eigen::VectorXd V(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("forward models: identity, subset, quadratic") {
  const Eigen::Vector3d x(0.5, -1.0, 2.0);
  IdentityModel id(3);
  CHECK(id.Predict(x, {}) == Eigen::VectorXd(x));
  CHECK(id.Jacobian(x, {}) == Eigen::MatrixXd::Identity(3, 3));
  SelectModel sel(3, {0, 2});
  CHECK(sel.Predict(x, {}) == V({0.5, 2.0}));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 3);
  expected(0, 0) = 1.0;
  expected(1, 2) = 1.0;
  CHECK(sel.Jacobian(x, {}) == expected);
  QuadraticModel quad(3);
  CHECK(quad.Predict(x, {}) == V({0.25, 1.0, 4.0}));
  CHECK(quad.Jacobian(x, {}) == Eigen::MatrixXd(V({1.0, -2.0, 4.0}).asDiagonal()));
  CHECK_THROWS_AS(id.Predict(Eigen::VectorXd::Zero(2), {}), std::invalid_argument);
  CHECK_THROWS_AS(SelectModel(3, {3}), std::invalid_argument);
}

TEST_CASE("prediction errors: consistent sensing and the visual example") {
  std::vector<SensorChannel> channels = {Proprio(3), Linear("v", Eigen::MatrixXd::Identity(2, 3), 5.0)};
  EstimatorState s = InitialState(Eigen::Vector3d(0.1, 0.2, 0.3), channels);
  const Eigen::VectorXd g_v = V({0.1, 0.2});

  auto consistent = Frame(0.0, {V({0.1, 0.2, 0.3}), g_v});
  const auto r0 = ComputePredictionErrors(s, consistent, channels, Config(3));
  CHECK(r0.channel_rates[0].isZero());
  CHECK(r0.channel_rates[1].isZero());
  CHECK(r0.prior_rate.isZero());

  auto shifted = Frame(0.0, {V({0.1, 0.2, 0.3}), V({2.1, 2.2})});
  const auto r1 = ComputePredictionErrors(s, shifted, channels, Config(3));
  CHECK(r1.channel_rates[1][0] == doctest::Approx(2.0));
  CHECK(r1.channel_rates[1][1] == doctest::Approx(2.0));
  // Stationary error where 2 - 5 e = 0.
  s.errors[1] = V({0.4, 0.4});
  const auto r2 = ComputePredictionErrors(s, shifted, channels, Config(3));
  CHECK(r2.channel_rates[1].cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("prediction errors: unavailable channels decay") {
  std::vector<SensorChannel> channels = {Proprio(2, 2.0)};
  EstimatorState s = InitialState(V({0.0, 0.0}), channels);
  s.errors[0] = V({1.0, -0.5});
  const auto r = ComputePredictionErrors(s, Frame(0.0, {Eigen::VectorXd()}), channels, Config(2));
  CHECK(r.channel_rates[0] == V({-2.0, 1.0}));
  CHECK_FALSE(r.active[0]);
}

TEST_CASE("state derivative examples") {
  std::vector<SensorChannel> p_only = {Proprio(3)};
  EstimatorState s = InitialState(Eigen::Vector3d::Zero(), p_only);
  const auto f = Frame(0.0, {Eigen::Vector3d::Zero()});
  CHECK(ComputeStateDerivative(s, f, p_only).isZero());
  s.e_x = V({0.1, 0, 0});
  s.errors[0] = V({0.3, 0, 0});
  CHECK(ComputeStateDerivative(s, f, p_only).isApprox(V({0.2, 0, 0})));

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 3);
  J(0, 0) = 0.5;
  std::vector<SensorChannel> v_only = {Linear("v", J, 5.0)};
  EstimatorState sv = InitialState(Eigen::Vector3d::Zero(), v_only);
  sv.errors[0] = V({1.0, 0.0});
  CHECK(ComputeStateDerivative(sv, Frame(0.0, {V({0, 0})}), v_only).isApprox(V({0.5, 0, 0})));
  // The same error contributes nothing while the channel has no reading.
  CHECK(ComputeStateDerivative(sv, Frame(0.0, {Eigen::VectorXd()}), v_only).isZero());
}

TEST_CASE("hand-worked two-step Euler trace") {
  std::vector<SensorChannel> channels = {Proprio(1)};
  const EstimatorState s0 = InitialState(V({0.0}), channels);
  const auto frame = Frame(0.0, {V({1.0})});
  const EstimatorConfig cfg = Config(1);
  const EstimatorState s1 = Step(s0, frame, channels, cfg);
  // e_p' = 1 - 0 - 0 = 1; x' = -e_x + e_p = 0.
  CHECK(s1.errors[0][0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(s1.body.x_hat[0] == 0.0);
  CHECK(s1.e_x[0] == 0.0);
  CHECK(s1.body.mu_x[0] == 0.0);
  CHECK(s1.t == doctest::Approx(0.05));
  const EstimatorState s2 = Step(s1, frame, channels, cfg);
  // x' = 0.05 -> 0.0025; e_p' = 1 - 0 - 0.05 = 0.95 -> 0.0975; e_x' = 0 - 0 - 0.
  CHECK(s2.body.x_hat[0] == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(s2.errors[0][0] == doctest::Approx(0.0975).epsilon(1e-15));
  CHECK(s2.e_x[0] == 0.0);
  CHECK(s2.body.mu_x[0] == 0.0);
  // The third step sees x_hat - mu = 0.0025 in the prior error.
  const EstimatorState s3 = Step(s2, frame, channels, cfg);
  CHECK(s3.e_x[0] == doctest::Approx(0.05 * 0.0025).epsilon(1e-15));
  CHECK(s3.body.x_hat[0] == doctest::Approx(0.0025 + 0.05 * 0.0975).epsilon(1e-15));
  CHECK(s3.errors[0][0] ==
        doctest::Approx(0.0975 + 0.05 * (1.0 - 0.0025 - 0.0975)).epsilon(1e-15));
}

TEST_CASE("step is pure and a consistent frame is a fixed point") {
  testing::Gen gen(4);
  Eigen::MatrixXd A = gen.Matrix(2, 3, -1, 1);
  std::vector<SensorChannel> channels = {Proprio(3), Linear("v", A, 5.0)};
  const Eigen::VectorXd x = gen.Vector(3, -1, 1);
  const EstimatorState s = InitialState(x, channels, 1.0);
  const auto frame = Frame(1.0, {x, A * x});
  const EstimatorState copy = s;
  const EstimatorState next = Step(s, frame, channels, Config(3));
  CHECK(s.body.x_hat == copy.body.x_hat);
  CHECK(next.body.x_hat == s.body.x_hat);
  CHECK(next.body.mu_x == s.body.mu_x);
  CHECK(next.e_x == s.e_x);
  CHECK(next.errors[1] == s.errors[1]);
  CHECK(next.t == doctest::Approx(1.05));
}

TEST_CASE("error states relax to their fixed points with x_hat frozen") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const double sigma_v = gen.Uniform(0.5, 6.0);
    Eigen::MatrixXd A = gen.Matrix(2, 3, -1, 1);
    std::vector<SensorChannel> channels = {Proprio(3, gen.Uniform(0.5, 2.0)), Linear("v", A, sigma_v)};
    EstimatorState s = InitialState(gen.Vector(3, -1, 1), channels);
    const auto frame = Frame(0.0, {gen.Vector(3, -1, 1), gen.Vector(2, -1, 1)});
    const EstimatorConfig cfg = Config(3);
    const double horizon = 10.0 / std::min(sigma_v, channels[0].variance[0]);
    for (int k = 0; k * cfg.dt < horizon; ++k) {
      const auto r = ComputePredictionErrors(s, frame, channels, cfg);
      for (size_t i = 0; i < channels.size(); ++i) s.errors[i] += cfg.dt * r.channel_rates[i];
    }
    for (size_t i = 0; i < channels.size(); ++i) {
      const Eigen::VectorXd g = channels[i].model->Predict(s.body.x_hat, {});
      const Eigen::VectorXd target =
          (frame.readings[i].value - g).cwiseQuotient(channels[i].variance);
      for (Eigen::Index k = 0; k < target.size(); ++k) {
        CHECK(std::abs(s.errors[i][k] - target[k]) <= 0.01 * std::abs(target[k]) + 1e-12);
      }
    }
  }
}

TEST_CASE("a masked channel is equivalent to a removed channel") {
  testing::Gen gen(12);
  Eigen::MatrixXd A = gen.Matrix(2, 3, -1, 1);
  std::vector<SensorChannel> with_v = {Proprio(3), Linear("v", A, 5.0)};
  std::vector<SensorChannel> without_v = {Proprio(3)};
  std::vector<SensorFrame> masked, removed;
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd sp = gen.Vector(3, -0.1, 0.1);
    masked.push_back(Frame(k * 0.05, {sp, Eigen::VectorXd()}));
    removed.push_back(Frame(k * 0.05, {sp}));
  }
  const Eigen::VectorXd x0 = gen.Vector(3, -1, 1);
  const auto a = Run(masked, InitialState(x0, with_v), with_v, Config(3));
  const auto b = Run(removed, InitialState(x0, without_v), without_v, Config(3));
  REQUIRE(a.rows() == b.rows());
  for (int r = 0; r < a.rows(); ++r) {
    CHECK(a.x_hat[r] == b.x_hat[r]);
    CHECK(a.mu_x[r] == b.mu_x[r]);
    CHECK(a.e_x[r] == b.e_x[r]);
    CHECK(a.errors[r][0] == b.errors[r][0]);
    CHECK(a.errors[r][1].isZero());
    CHECK(a.free_energy[r] == b.free_energy[r]);
  }
}

TEST_CASE("a discrepant channel pulls the stationary estimate along J^T e") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int k_channels = gen.Int(1, 3);
    const Eigen::VectorXd x_true = gen.Vector(3, -0.5, 0.5);
    std::vector<SensorChannel> channels = {Proprio(3)};
    std::vector<Eigen::VectorXd> readings = {x_true};
    for (int c = 0; c < k_channels; ++c) {
      Eigen::MatrixXd A = gen.Matrix(2, 3, -0.8, 0.8);
      channels.push_back(Linear("c" + std::to_string(c), A, gen.Uniform(1.0, 3.0)));
      readings.push_back(A * x_true);
    }
    const int j = gen.Int(1, k_channels);
    const Eigen::VectorXd d = gen.Vector(2, -0.5, 0.5);
    readings[j] += d;
    const Eigen::MatrixXd J_j = channels[j].model->Jacobian(x_true, {});

    EstimatorConfig cfg = Config(3);
    cfg.lambda = 0.0;
    EstimatorState s = InitialState(x_true, channels);
    const auto frame = Frame(0.0, readings);
    for (int k = 0; k < 4000; ++k) s = Step(s, frame, channels, cfg);
    const Eigen::VectorXd shift = s.body.x_hat - x_true;
    CHECK(shift.dot(J_j.transpose() * d) > 0.0);
  }
}

TEST_CASE("masking a channel mid-run keeps the state finite") {
  testing::Gen gen(30);
  Eigen::MatrixXd A = gen.Matrix(2, 3, -2, 2);
  std::vector<SensorChannel> channels = {Proprio(3), Linear("v", A, 5.0)};
  std::vector<SensorFrame> frames;
  for (int k = 0; k < 400; ++k) {
    const bool visible = (k / 37) % 2 == 0;
    frames.push_back(Frame(k * 0.05, {gen.Vector(3, -1, 1), visible ? gen.Vector(2, -3, 3)
                                                                     : Eigen::VectorXd()}));
  }
  const auto log = Run(frames, InitialState(gen.Vector(3, -1, 1), channels), channels, Config(3));
  for (int r = 0; r < log.rows(); ++r) {
    CHECK(log.x_hat[r].allFinite());
    CHECK(log.errors[r][1].allFinite());
  }
}

TEST_CASE("non-finite predictions mask the channel and are reported") {
  std::vector<SensorChannel> channels = {Proprio(1), {"f", V({1.0}), std::make_shared<FaultyModel>(0.01)}};
  std::vector<SensorFrame> frames;
  for (int k = 0; k < 100; ++k) frames.push_back(Frame(k * 0.05, {V({1.0}), V({1.0})}));
  const auto log = Run(frames, InitialState(V({0.0}), channels), channels, Config(1));
  CHECK_FALSE(log.faults.empty());
  CHECK(log.faults.front().second == "f");
  CHECK(log.x_hat.back().allFinite());
  CHECK(log.x_hat.back()[0] > 0.01);
}

TEST_CASE("divergence is detected with the offending component and step") {
  std::vector<SensorChannel> channels = {Proprio(1)};
  EstimatorConfig cfg = Config(1);
  cfg.dt = 5.0;  // far beyond the stable step size
  std::vector<SensorFrame> frames(200, Frame(0.0, {V({1.0})}));
  try {
    Run(frames, InitialState(V({0.0}), channels), channels, cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step_index() > 0);
    CHECK(e.step_index() < 200);
    CHECK_FALSE(e.component().empty());
    CHECK(e.last_finite().body.x_hat.allFinite());
  }
  EstimatorState s = InitialState(V({0.0}), channels);
  CHECK_THROWS_AS(Step(s, Frame(0.0, {V({1e9})}), channels, Config(1)), DivergenceError);
}

TEST_CASE("invalid configuration and frames are rejected") {
  std::vector<SensorChannel> channels = {Proprio(3)};
  EstimatorConfig cfg = Config(3);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(Run({}, InitialState(Eigen::Vector3d::Zero(), channels), channels, cfg),
                  std::invalid_argument);
  const EstimatorState s = InitialState(Eigen::Vector3d::Zero(), channels);
  CHECK_THROWS_AS(Step(s, Frame(0.0, {V({1.0})}), channels, Config(3)), std::invalid_argument);
  CHECK_THROWS_AS(Step(s, Frame(0.0, {}), channels, Config(3)), std::invalid_argument);
}

TEST_CASE("free energy sums precision-weighted squared errors") {
  std::vector<SensorChannel> channels = {Proprio(2, 2.0), Linear("v", Eigen::MatrixXd::Identity(2, 2), 4.0)};
  EstimatorState s = InitialState(V({0.0, 0.0}), channels);
  s.body.mu_x = V({1.0, 0.0});
  EstimatorConfig cfg = Config(2);
  const auto frame = Frame(0.0, {V({1.0, 2.0}), V({0.0, 4.0})});
  // (1 + 4) / 4 + 16 / 8 + 1 / 2
  CHECK(FreeEnergy(s, frame, channels, cfg) == doctest::Approx(1.25 + 2.0 + 0.5));
  const auto no_v = Frame(0.0, {V({1.0, 2.0}), Eigen::VectorXd()});
  CHECK(FreeEnergy(s, no_v, channels, cfg) == doctest::Approx(1.25 + 0.5));
}

TEST_CASE("proprioception-only estimate settles inside the noise on a static pose") {
  testing::Gen gen(5);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::mt19937_64 engine(5);
  std::vector<SensorChannel> channels = {Proprio(3)};
  const Eigen::Vector3d truth(-0.6, -0.5, 0.75);
  std::vector<SensorFrame> frames;
  for (int k = 0; k < 400; ++k) {
    Eigen::VectorXd z = truth;
    for (int j = 0; j < 3; ++j) z[j] += noise(engine);
    frames.push_back(Frame(k * 0.05, {z}));
  }
  const auto log = Run(frames, InitialState(truth + Eigen::Vector3d(0.1, -0.1, 0.05), channels),
                       channels, Config(3));
  double sum = 0.0;
  int n = 0;
  for (int r = 0; r < log.rows(); ++r) {
    if (log.t[r] < 5.0) continue;
    sum += (log.x_hat[r] - truth).cwiseAbs().sum();
    n += 3;
  }
  CHECK(sum / n < 0.02);
}

TEST_CASE("empty frame sequence yields only the initial row") {
  std::vector<SensorChannel> channels = {Proprio(3)};
  const auto log = Run({}, InitialState(Eigen::Vector3d(1, 2, 3), channels), channels, Config(3));
  REQUIRE(log.rows() == 1);
  CHECK(log.x_hat[0] == Eigen::VectorXd(Eigen::Vector3d(1, 2, 3)));
  CHECK(log.free_energy[0] == 0.0);
}

TEST_CASE("trajectory log csv layout and round trip") {
  testing::Gen gen(50);
  Eigen::MatrixXd A = gen.Matrix(2, 3, -1, 1);
  std::vector<SensorChannel> channels = {Proprio(3), Linear("v", A, 5.0)};
  std::vector<SensorFrame> frames;
  for (int k = 0; k < 20; ++k) {
    frames.push_back(Frame(k * 0.05, {gen.Vector(3, -1, 1), k % 3 ? gen.Vector(2, -1, 1)
                                                                    : Eigen::VectorXd()}));
  }
  auto log = Run(frames, InitialState(gen.Vector(3, -1, 1), channels), channels, Config(3));
  std::vector<Eigen::VectorXd> truth(log.rows(), Eigen::VectorXd::Zero(3));
  log.AttachTruth(truth);
  const csv::Table table = log.ToTable();
  const std::vector<std::string> expected = {
      "t",       "x_hat_1", "x_hat_2", "x_hat_3", "mu_x_1", "mu_x_2", "mu_x_3",
      "truth_1", "truth_2", "truth_3", "e_x_1",  "e_x_2",  "e_x_3",  "e_p_1",
      "e_p_2",   "e_p_3",   "e_v_1",   "e_v_2",   "g_p_1",  "g_p_2",  "g_p_3",
      "g_v_1",   "g_v_2",   "free_energy"};
  CHECK(table.header == expected);
  CHECK(table.rows.size() == 21);

  const std::string dir = testing::ScratchDir("traj_log");
  log.WriteCsv(dir + "/log.csv");
  const auto back = TrajectoryLog::ReadCsv(dir + "/log.csv");
  CHECK(back.channel_ids == log.channel_ids);
  CHECK(back.channel_dims == log.channel_dims);
  REQUIRE(back.rows() == log.rows());
  for (int r = 0; r < log.rows(); ++r) {
    CHECK(back.x_hat[r] == log.x_hat[r]);
    CHECK(back.errors[r][1] == log.errors[r][1]);
    CHECK(back.free_energy[r] == log.free_energy[r]);
  }
  CHECK_THROWS_AS(log.AttachTruth({}), std::invalid_argument);
}
