#pragma once

#include <string>

#include "lqsim/lindblad.hpp"
#include "lqsim/qcore.hpp"

namespace lqsim {

// Gaussian Rabi envelope; the drive window is center +/- 3 sigma
// (tau_p = 6 sigma_p), so the edge value is peak * e^{-4.5}.
struct PulseEnvelope {
    double peak = 0.0;    // rad/ps
    double sigma = 1.0;   // ps
    double center = 0.0;  // ps

    double value(double t) const {
        const double u = (t - center) / sigma;
        return peak * std::exp(-0.5 * u * u);
    }
    double window_start() const { return center - 3.0 * sigma; }
    double window_end() const { return center + 3.0 * sigma; }

    void validate() const {
        if (peak < 0.0) throw validation_error("PulseEnvelope: negative peak");
        if (sigma <= 0.0) throw validation_error("PulseEnvelope: sigma <= 0");
    }
};

// Minimum pulse area for adiabatic operation and the detuning/Rabi ratio the
// small-phi (dark-state) regime requires.
inline constexpr double min_pulse_area = 100.0;
inline constexpr double min_delta_over_omega = 10.0;

// Everything needed to drive one synthesized rotation:
//   alpha  relative laser phase (axis azimuth = -alpha)
//   beta   amplitude mixing angle, tan(beta) = Omega_1/Omega_0
//   gamma  target rotation angle
//   delta  single-photon detuning, the gamma knob
struct GateSpec {
    double alpha = 0.0;          // rad
    double beta = 0.0;           // rad, in [0, pi/2]
    double gamma = 0.0;          // rad, in (0, pi]
    double delta = 0.0;          // rad/ps
    double omega_rms_max = 0.0;  // rad/ps
    double sigma_p = 0.0;        // ps
    double t_center = 0.0;       // ps

    double pulse_area() const { return omega_rms_max * 6.0 * sigma_p; }
    double omega0_max() const { return omega_rms_max * std::cos(beta); }
    double omega1_max() const { return omega_rms_max * std::sin(beta); }
    PulseEnvelope envelope0() const { return {omega0_max(), sigma_p, t_center}; }
    PulseEnvelope envelope1() const { return {omega1_max(), sigma_p, t_center}; }
    double window_start() const { return t_center - 3.0 * sigma_p; }
    double window_end() const { return t_center + 3.0 * sigma_p; }
    RotationTarget rotation_target() const;

    void validate() const;
};

// Adiabatic eigenframe of the driven Lambda Hamiltonian.  Eigenvalues
// lambda_1 = 0, lambda_2 = -2 Z sin^2 phi <= 0, lambda_3 = 2 Z cos^2 phi;
// |Phi_1> has exactly zero |X-> component and <Phi_2|X-> = sin(phi).
struct LambdaEigenframe {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    PulseEnvelope env_rms;  // peak = omega_rms_max

    double omega_rms(double t) const { return env_rms.value(t); }
    double big_z(double t) const {
        const double w = omega_rms(t);
        return std::sqrt(w * w + 0.25 * delta * delta);
    }
    double phi(double t) const { return 0.5 * std::atan2(2.0 * omega_rms(t), delta); }
    double lambda2(double t) const {
        const double s = std::sin(phi(t));
        return -2.0 * big_z(t) * s * s;
    }
    double lambda3(double t) const {
        const double c = std::cos(phi(t));
        return 2.0 * big_z(t) * c * c;
    }
    Vector eigenvector(int which, double t) const;  // which in {1,2,3}
};

// H in the basis {|0>, |X->, |1>}:
//   [[0,            Omega0 e^{+i alpha}, 0      ],
//    [Omega0 e^{-i alpha}, Delta,        Omega1 ],
//    [0,            Omega1,              0      ]]
Eigen::Matrix3cd build_hamiltonian(const GateSpec& spec, double t);

LambdaEigenframe eigenframe(const GateSpec& spec);

// gamma(Delta) = int [sqrt(Omega_rms(t)^2 + (Delta/2)^2) - Delta/2] dt over
// the +/- 3 sigma window, adaptive quadrature to 1e-9 relative.
double rotation_angle(double omega_rms_max, double sigma_p, double delta);
inline double rotation_angle(const GateSpec& spec) {
    return rotation_angle(spec.omega_rms_max, spec.sigma_p, spec.delta);
}

// Solves gamma(Delta) = gamma_target on [10 Omega_rms_max, inf) by bracketed
// bisection/secant (gamma is strictly decreasing in Delta).  Throws
// infeasible_error when gamma_target exceeds gamma at the bracket's left end.
double invert_detuning(double omega_rms_max, double sigma_p, double gamma_target,
                       double rel_tol = 1e-8);

// alpha from the axis azimuth, beta from the polar angle, delta from
// invert_detuning.
GateSpec synthesize_gate(const RotationTarget& target, double omega_rms_max,
                         double sigma_p, double t_center = 0.0);

// Defaults satisfying area >= 100 and the ~10 ps single-qubit timescale.
// The area has a margin above 100 so that gamma = pi remains reachable with
// Delta >= 10 Omega_rms_max.
inline constexpr double default_sigma_p = 1.7;                              // ps
inline constexpr double default_pulse_area = 110.0;
inline constexpr double default_omega_rms_max = default_pulse_area / (6.0 * default_sigma_p);

RotationTarget standard_gate(const std::string& name);  // X, H, Z, S, T

// Lindblad simulation over the pulse window with the 3-level collapse set;
// fidelity traces against ideal_rotation applied to the initial qubit state.
// Precondition: |X-> population of rho0 below 1e-9.
Trajectory simulate_gate(const GateSpec& spec, const DensityMatrix& rho0,
                         const DecoherenceRates& rates, IntegratorConfig cfg = {});

}  // namespace lqsim
