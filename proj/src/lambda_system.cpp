#include "lqsim/lambda_system.hpp"

#include <cmath>

#include "lqsim/quadrature.hpp"

namespace lqsim {

RotationTarget GateSpec::rotation_target() const {
    const double s = std::sin(2.0 * beta);
    Vec3 axis(s * std::cos(alpha), -s * std::sin(alpha), std::cos(2.0 * beta));
    return RotationTarget(axis, gamma);
}

void GateSpec::validate() const {
    if (sigma_p <= 0.0) throw validation_error("GateSpec: sigma_p <= 0");
    if (omega_rms_max <= 0.0) throw validation_error("GateSpec: omega_rms_max <= 0");
    if (beta < 0.0 || beta > 0.5 * M_PI + 1e-12)
        throw validation_error("GateSpec: beta outside [0, pi/2]");
    if (gamma <= 0.0 || gamma > M_PI + 1e-12)
        throw validation_error("GateSpec: gamma outside (0, pi]");
    if (pulse_area() < min_pulse_area - 1e-9)
        throw validation_error("GateSpec: pulse area below A_min = 100");
    if (delta < min_delta_over_omega * omega_rms_max - 1e-9)
        throw validation_error("GateSpec: delta < 10 * omega_rms_max");
    const double reconstructed =
        std::hypot(omega0_max(), omega1_max());
    if (std::abs(reconstructed - omega_rms_max) > 1e-12 * omega_rms_max)
        throw validation_error("GateSpec: envelope peaks inconsistent");
}

Eigen::Matrix3cd build_hamiltonian(const GateSpec& spec, double t) {
    const double w0 = spec.envelope0().value(t);
    const double w1 = spec.envelope1().value(t);
    const Complex phase = std::exp(Complex(0.0, spec.alpha));
    Eigen::Matrix3cd h;
    h << 0.0, w0 * phase, 0.0,
         w0 * std::conj(phase), spec.delta, w1,
         0.0, w1, 0.0;
    return h;
}

Vector LambdaEigenframe::eigenvector(int which, double t) const {
    const Complex ea = std::exp(Complex(0.0, alpha));
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double p = phi(t);
    const double sp = std::sin(p), cp = std::cos(p);
    Vector v(3);
    switch (which) {
        case 1: v << -ea * sb, 0.0, cb; break;
        case 2: v << -ea * cb * cp, sp, -sb * cp; break;
        case 3: v << ea * cb * sp, cp, sb * sp; break;
        default: throw validation_error("eigenvector: index must be 1, 2 or 3");
    }
    return v;
}

LambdaEigenframe eigenframe(const GateSpec& spec) {
    if (spec.delta <= 0.0)
        throw validation_error("eigenframe: requires Delta > 0");
    LambdaEigenframe f;
    f.alpha = spec.alpha;
    f.beta = spec.beta;
    f.delta = spec.delta;
    f.env_rms = {spec.omega_rms_max, spec.sigma_p, spec.t_center};
    return f;
}

double rotation_angle(double omega_rms_max, double sigma_p, double delta) {
    if (delta < 0.0) throw validation_error("rotation_angle: delta < 0");
    if (omega_rms_max <= 0.0 || sigma_p <= 0.0)
        throw validation_error("rotation_angle: envelope undefined");
    const double half = 0.5 * delta;
    const auto integrand = [=](double t) {
        const double u = t / sigma_p;
        const double w = omega_rms_max * std::exp(-0.5 * u * u);
        // sqrt(w^2 + half^2) - half, written cancellation-free
        return w * w / (std::sqrt(w * w + half * half) + half);
    };
    return integrate_adaptive(integrand, -3.0 * sigma_p, 3.0 * sigma_p, 1e-9, 1e-14);
}

double invert_detuning(double omega_rms_max, double sigma_p, double gamma_target,
                       double rel_tol) {
    if (gamma_target <= 0.0 || gamma_target > M_PI)
        throw validation_error("invert_detuning: gamma_target outside (0, pi]");
    double lo = min_delta_over_omega * omega_rms_max;
    const double gamma_lo = rotation_angle(omega_rms_max, sigma_p, lo);
    if (gamma_target > gamma_lo)
        throw infeasible_error(
            "invert_detuning: gamma_target exceeds gamma(10*Omega_rms_max); raise pulse_area");
    double hi = 2.0 * lo;
    double gamma_hi = rotation_angle(omega_rms_max, sigma_p, hi);
    while (gamma_hi > gamma_target) {
        lo = hi;
        hi *= 2.0;
        gamma_hi = rotation_angle(omega_rms_max, sigma_p, hi);
        if (hi > 1e12 * omega_rms_max)
            throw infeasible_error("invert_detuning: bracket expansion failed");
    }
    // gamma() is strictly decreasing on [lo, hi]; bisect with a secant probe.
    double glo = rotation_angle(omega_rms_max, sigma_p, lo);
    double ghi = gamma_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = lo + (glo - gamma_target) / (glo - ghi) * (hi - lo);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        const double gm = rotation_angle(omega_rms_max, sigma_p, mid);
        if (std::abs(gm - gamma_target) < 0.1 * rel_tol * gamma_target) return mid;
        if (gm > gamma_target) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
        if ((hi - lo) < rel_tol * lo) break;
    }
    return 0.5 * (lo + hi);
}

GateSpec synthesize_gate(const RotationTarget& target, double omega_rms_max,
                         double sigma_p, double t_center) {
    const Vec3& n = target.axis();
    GateSpec spec;
    spec.beta = 0.5 * std::acos(std::clamp(n.z(), -1.0, 1.0));
    const double transverse = std::hypot(n.x(), n.y());
    spec.alpha = transverse < 1e-12 ? 0.0 : -std::atan2(n.y(), n.x());
    spec.gamma = target.angle();
    spec.omega_rms_max = omega_rms_max;
    spec.sigma_p = sigma_p;
    spec.t_center = t_center;
    spec.delta = invert_detuning(omega_rms_max, sigma_p, target.angle());
    spec.validate();
    return spec;
}

RotationTarget standard_gate(const std::string& name) {
    if (name == "X") return {Vec3(1, 0, 0), M_PI};
    if (name == "H") return {Vec3(1, 0, 1) / std::sqrt(2.0), M_PI};
    if (name == "Z") return {Vec3(0, 0, -1), M_PI};
    if (name == "S") return {Vec3(0, 0, -1), 0.5 * M_PI};
    if (name == "T") return {Vec3(0, 0, -1), 0.25 * M_PI};
    throw validation_error("standard_gate: unknown gate '" + name + "'");
}

Trajectory simulate_gate(const GateSpec& spec, const DensityMatrix& rho0,
                         const DecoherenceRates& rates, IntegratorConfig cfg) {
    spec.validate();
    if (rho0.dim() != 3) throw validation_error("simulate_gate: expected a 3-level state");
    if (rho0.population(1) > 1e-9)
        throw validation_error("simulate_gate: initial |X-> population above 1e-9");

    if (cfg.output_times.empty()) {
        const int n = 201;
        for (int i = 0; i < n; ++i)
            cfg.output_times.push_back(spec.window_start() +
                                       (spec.window_end() - spec.window_start()) * i / (n - 1));
    }
    if (cfg.max_step <= 0.0) cfg.max_step = spec.sigma_p / 20.0;

    // Ideal reference: the rotation oracle applied to the qubit block,
    // embedded back into the 3-level space.
    const Eigen::Matrix2cd u2 =
        rotation_unitary(spec.rotation_target().axis(), spec.rotation_target().angle());
    Matrix u3 = Matrix::Identity(3, 3);
    u3(0, 0) = u2(0, 0); u3(0, 2) = u2(0, 1);
    u3(2, 0) = u2(1, 0); u3(2, 2) = u2(1, 1);
    const Matrix ideal = u3 * rho0.matrix() * u3.adjoint();

    const auto channels = build_collapse_set(SystemLayout::lambda3, rates);
    const auto h = [spec](double t) -> Matrix { return build_hamiltonian(spec, t); };
    return integrate(h, channels, rho0, cfg, &ideal);
}

}  // namespace lqsim
