#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gpmpc/linalg.hpp"

namespace gpmpc {

struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rigid-body quadcopter parameters. Defaults are the reference vehicle used
/// throughout the test suite and the shipped configs.
struct QuadParams {
  double mass = 1.862;            // kg
  double inertia_xx = 0.0429;     // kg m^2
  double inertia_yy = 0.0437;     // kg m^2
  double inertia_zz = 0.0753;     // kg m^2
  double drag_coeff = 0.1735;     // N per m/s, linear aerodynamic drag
  double thrust_max = 62.06;      // N
  double torque_x_max = 4.6548;   // N m
  double torque_y_max = 4.6548;   // N m
  double torque_z_max = 1.7;      // N m
  static constexpr double gravity = 9.81;  // m/s^2

  double hover_thrust_fraction() const { return mass * gravity / thrust_max; }

  void validate() const {
    if (!(mass > 0 && inertia_xx > 0 && inertia_yy > 0 && inertia_zz > 0 &&
          drag_coeff > 0 && thrust_max > 0 && torque_x_max > 0 &&
          torque_y_max > 0 && torque_z_max > 0)) {
      throw std::invalid_argument("QuadParams: all parameters must be strictly positive");
    }
  }
};

/// State layout: inertial position, inertial velocity, roll/pitch/yaw Euler
/// angles, Euler angle rates. Stacked vector order matches the field order.
struct QuadState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 euler = Vec3::Zero();
  Vec3 euler_rate = Vec3::Zero();

  Vec12 to_vector() const {
    Vec12 x;
    x << position, velocity, euler, euler_rate;
    return x;
  }

  static QuadState from_vector(const Vec12& x) {
    QuadState s;
    s.position = x.segment<3>(0);
    s.velocity = x.segment<3>(3);
    s.euler = x.segment<3>(6);
    s.euler_rate = x.segment<3>(9);
    return s;
  }

  bool all_finite() const { return to_vector().allFinite(); }
};

/// Normalized input: thrust fraction T/T_max in [0,1], per-axis torque
/// fractions in [-1,1].
using NormalizedInput = Vec4;

struct LinearModel {
  Mat12 A = Mat12::Zero();     // continuous time
  Mat12x4 B = Mat12x4::Zero();
  Vec4 trim_input = Vec4::Zero();
};

struct DiscreteModel {
  Mat12 A = Mat12::Zero();
  Mat12x4 B = Mat12x4::Zero();
  double dt = 0.0;
};

inline double wrap_angle(double a) {
  const double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a <= 0.0) a += 2.0 * pi;
  return a - pi;
}

/// Body-to-inertial rotation for roll/pitch/yaw (ZYX) Euler angles.
inline Mat3 rotation_body_to_inertial(const Vec3& euler) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), sth = std::sin(euler.y());
  const double cpsi = std::cos(euler.z()), spsi = std::sin(euler.z());
  Mat3 r;
  r << cpsi * cth, cpsi * sth * sphi - spsi * cphi, cpsi * sth * cphi + spsi * sphi,
       spsi * cth, spsi * sth * sphi + cpsi * cphi, spsi * sth * cphi - cpsi * sphi,
       -sth,       cth * sphi,                      cth * cphi;
  return r;
}

/// Maps body angular rate to Euler angle rates: euler_rate = W(euler) * omega.
inline Mat3 euler_rate_matrix(const Vec3& euler) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), tth = std::tan(euler.y());
  Mat3 w;
  w << 1.0, sphi * tth, cphi * tth,
       0.0, cphi,       -sphi,
       0.0, sphi / cth, cphi / cth;
  return w;
}

/// Inverse of euler_rate_matrix: omega = W^-1(euler) * euler_rate.
inline Mat3 body_rate_matrix(const Vec3& euler) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), sth = std::sin(euler.y());
  Mat3 w;
  w << 1.0, 0.0,  -sth,
       0.0, cphi, sphi * cth,
       0.0, -sphi, cphi * cth;
  return w;
}

namespace detail {

// Time derivative of euler_rate_matrix along the current Euler angle rates.
inline Mat3 euler_rate_matrix_derivative(const Vec3& euler, const Vec3& euler_rate) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), tth = std::tan(euler.y());
  const double sec2 = 1.0 / (cth * cth);
  const double dphi = euler_rate.x(), dth = euler_rate.y();
  Mat3 dw;
  dw << 0.0,
        cphi * tth * dphi + sphi * sec2 * dth,
        -sphi * tth * dphi + cphi * sec2 * dth,
        0.0, -sphi * dphi, -cphi * dphi,
        0.0,
        (cphi * dphi * cth + sphi * std::sin(euler.y()) * dth) * sec2 * cth / cth,
        (-sphi * dphi * cth + cphi * std::sin(euler.y()) * dth) * sec2;
  // Row 3 entries expanded: d/dt (sphi/cth) = (cphi*dphi*cth + sphi*sth*dth)/cth^2
  dw(2, 1) = (cphi * dphi * cth + sphi * std::sin(euler.y()) * dth) * sec2;
  dw(2, 2) = (-sphi * dphi * cth + cphi * std::sin(euler.y()) * dth) * sec2;
  return dw;
}

inline NormalizedInput saturate(const NormalizedInput& u) {
  NormalizedInput v;
  v(0) = std::clamp(u(0), 0.0, 1.0);  // rotors cannot push down
  for (int i = 1; i < 4; ++i) v(i) = std::clamp(u(i), -1.0, 1.0);
  return v;
}

}  // namespace detail

/// Continuous-time derivative of the full nonlinear model. The latent force
/// (N, inertial frame) enters the translational dynamics additively.
inline Vec12 nonlinear_derivative(const QuadState& state, const NormalizedInput& input,
                                  const QuadParams& params, const Vec3& latent_force) {
  if (!state.all_finite() || !input.allFinite() || !latent_force.allFinite()) {
    throw std::invalid_argument("nonlinear_derivative: non-finite input");
  }
  const NormalizedInput u = detail::saturate(input);
  const double thrust = u(0) * params.thrust_max;
  const Vec3 torque(u(1) * params.torque_x_max, u(2) * params.torque_y_max,
                    u(3) * params.torque_z_max);

  const Mat3 rot = rotation_body_to_inertial(state.euler);
  Vec3 force = rot * Vec3(0.0, 0.0, thrust);
  force.z() -= params.mass * QuadParams::gravity;
  force -= params.drag_coeff * state.velocity;
  force += latent_force;

  const Vec3 inertia(params.inertia_xx, params.inertia_yy, params.inertia_zz);
  const Vec3 omega = body_rate_matrix(state.euler) * state.euler_rate;
  const Vec3 omega_dot =
      (torque - omega.cross(inertia.cwiseProduct(omega))).cwiseQuotient(inertia);
  const Vec3 euler_accel =
      detail::euler_rate_matrix_derivative(state.euler, state.euler_rate) * omega +
      euler_rate_matrix(state.euler) * omega_dot;

  Vec12 dx;
  dx << state.velocity, force / params.mass, state.euler_rate, euler_accel;
  return dx;
}

/// Jacobians of the nonlinear model at the hovering trim. Block structure:
/// position/velocity integrators, gravity tilt coupling in the velocity rows,
/// identity Euler kinematics, and normalized actuation gains.
inline LinearModel linearize_hover(const QuadParams& params) {
  params.validate();
  LinearModel m;
  const double g = QuadParams::gravity;
  m.A.block<3, 3>(0, 3) = Mat3::Identity();
  m.A.block<3, 3>(3, 3) = -(params.drag_coeff / params.mass) * Mat3::Identity();
  m.A(3, 7) = g;   // x-accel from pitch
  m.A(4, 6) = -g;  // y-accel from roll
  m.A.block<3, 3>(6, 9) = Mat3::Identity();
  m.B(5, 0) = params.thrust_max / params.mass;
  m.B(9, 1) = params.torque_x_max / params.inertia_xx;
  m.B(10, 2) = params.torque_y_max / params.inertia_yy;
  m.B(11, 3) = params.torque_z_max / params.inertia_zz;
  m.trim_input << params.hover_thrust_fraction(), 0.0, 0.0, 0.0;
  return m;
}

/// Zero-order-hold discretization via the matrix exponential of the
/// [[A, B], [0, 0]] block embedding.
inline DiscreteModel discretize_exact(const LinearModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("discretize_exact: dt must be positive");
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(16, 16);
  block.topLeftCorner<12, 12>() = model.A;
  block.topRightCorner<12, 4>() = model.B;
  const Eigen::MatrixXd e = expm(block * dt);
  DiscreteModel d;
  d.A = e.topLeftCorner<12, 12>();
  d.B = e.topRightCorner<12, 4>();
  d.dt = dt;
  return d;
}

/// One fixed-step RK4 step of the nonlinear truth model.
inline QuadState integrate_truth(const QuadState& state, const NormalizedInput& input,
                                 const QuadParams& params, const Vec3& latent_force,
                                 double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_truth: dt must be positive");
  const Vec12 x0 = state.to_vector();
  const auto deriv = [&](const Vec12& x) {
    return nonlinear_derivative(QuadState::from_vector(x), input, params, latent_force);
  };
  const Vec12 k1 = deriv(x0);
  const Vec12 k2 = deriv(x0 + 0.5 * dt * k1);
  const Vec12 k3 = deriv(x0 + 0.5 * dt * k2);
  const Vec12 k4 = deriv(x0 + dt * k3);
  const Vec12 x1 = x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!x1.allFinite()) {
    throw SimulationFault("integrate_truth: state became non-finite");
  }
  return QuadState::from_vector(x1);
}

}  // namespace gpmpc
