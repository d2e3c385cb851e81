#include "lqsim/nanowire.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include "lqsim/constants.hpp"
#include "lqsim/quadrature.hpp"

namespace lqsim {

double DeviceGeometry::total_length() const {
    double l = 2.0 * padding;
    for (const auto& [phase, len] : segments) l += len;
    return l;
}

void DeviceGeometry::validate() const {
    if (radius <= 0.0) throw validation_error("DeviceGeometry: radius <= 0");
    if (segments.empty()) throw validation_error("DeviceGeometry: no segments");
    for (const auto& [phase, len] : segments)
        if (len <= 0.0) throw validation_error("DeviceGeometry: segment length <= 0");
    if (grid_step <= 0.0 || grid_step > 0.05)
        throw validation_error("DeviceGeometry: grid_step must be in (0, 0.05] nm");
    if (padding < 0.0) throw validation_error("DeviceGeometry: negative padding");
}

void MaterialParams::validate() const {
    if (m_e <= 0 || m_h <= 0 || E_g_ZB <= 0 || E_g_WZ <= 0 || dc <= 0 || dv <= 0 ||
        M2 <= 0 || n_refr <= 0)
        throw validation_error("MaterialParams: all parameters must be positive");
}

double AxialMode::probability_in(double z0, double z1) const {
    double p = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double zm = 0.5 * (z[i] + z[i + 1]);
        if (zm >= z0 && zm < z1)
            p += 0.5 * (samples[i] * samples[i] + samples[i + 1] * samples[i + 1]) *
                 (z[i + 1] - z[i]);
    }
    return p;
}

double bessel_zero(int m, int l) {
    if (m < 0 || l < 1) throw validation_error("bessel_zero: need m >= 0, l >= 1");
    // McMahon's expansion seeds the bracket; Newton with J_m' polishes.
    const double beta = (l + 0.5 * m - 0.25) * pi;
    double x = beta - (4.0 * m * m - 1.0) / (8.0 * beta);
    const auto f = [m](double v) { return std::cyl_bessel_j(m, v); };
    const auto df = [m](double v) {
        if (m == 0) return -std::cyl_bessel_j(1, v);
        return 0.5 * (std::cyl_bessel_j(m - 1, v) - std::cyl_bessel_j(m + 1, v));
    };
    for (int it = 0; it < 50; ++it) {
        const double step = f(x) / df(x);
        x -= step;
        if (std::abs(step) < 1e-13 * x) break;
    }
    return x;
}

double RadialMode::normalized_value(double r) const {
    if (r > radius) return 0.0;
    // norm^2 = int J_m(kappa r)^2 r dr = r_w^2/2 J_{m+1}(j_{m,l})^2
    const double norm =
        radius * std::sqrt(0.5) * std::abs(std::cyl_bessel_j(m + 1, bessel_zero));
    return std::cyl_bessel_j(m, kappa * r) / norm;
}

RadialMode solve_radial(double radius, double mass_m0, int m, int l) {
    if (radius <= 0.0 || mass_m0 <= 0.0)
        throw validation_error("solve_radial: radius and mass must be positive");
    RadialMode mode;
    mode.m = m;
    mode.l = l;
    mode.radius = radius;
    mode.bessel_zero = bessel_zero(m, l);
    mode.kappa = mode.bessel_zero / radius;
    const double scale = hbar_sq_over_2m0 / (mass_m0 * radius * radius);  // meV
    mode.energy_linear = scale * mode.bessel_zero;
    mode.energy_quadratic = scale * mode.bessel_zero * mode.bessel_zero;
    return mode;
}

namespace {

// Carrier potential on the grid: 0 in the barrier (and padding), -depth in
// the wells (ZB for electrons, WZ for holes).
std::vector<double> build_potential(const DeviceGeometry& geom, const MaterialParams& mat,
                                    Carrier carrier, const std::vector<double>& z) {
    const CrystalPhase well =
        carrier == Carrier::electron ? CrystalPhase::ZB : CrystalPhase::WZ;
    const double depth = carrier == Carrier::electron ? mat.dc : mat.dv;
    std::vector<double> v(z.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
        double edge = geom.padding;
        for (const auto& [phase, len] : geom.segments) {
            if (z[i] >= edge && z[i] < edge + len) {
                if (phase == well) v[i] = -depth;
                break;
            }
            edge += len;
        }
    }
    return v;
}

}  // namespace

std::vector<AxialMode> solve_axial(const DeviceGeometry& geom, const MaterialParams& mat,
                                   Carrier carrier, int n_modes) {
    geom.validate();
    mat.validate();
    const double mass = carrier == Carrier::electron ? mat.m_e : mat.m_h;
    const double length = geom.total_length();
    const int n = static_cast<int>(std::lround(length / geom.grid_step)) - 1;  // interior points
    if (n < 10) throw validation_error("solve_axial: grid too coarse");
    const double hz = length / (n + 1);

    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = (i + 1) * hz;
    const std::vector<double> v = build_potential(geom, mat, carrier, z);

    // -(hbar^2/2m) Z'' + V Z = E Z, three-point stencil, Dirichlet ends.
    const double kinetic = hbar_sq_over_2m0 / (mass * hz * hz);  // meV
    std::vector<double> diag(n), offdiag(n - 1, -kinetic);
    for (int i = 0; i < n; ++i) diag[i] = 2.0 * kinetic + v[i];

    n_modes = std::min(n_modes, n);
    std::vector<double> w(n);
    std::vector<double> zvec(static_cast<std::size_t>(n) * n_modes);
    std::vector<lapack_int> iblock(n), isplit(n), ifail(n_modes);
    lapack_int m_found = 0, nsplit = 0;
    lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, n_modes, 2.0 * LAPACKE_dlamch('S'),
                                     diag.data(), offdiag.data(), &m_found, &nsplit, w.data(),
                                     iblock.data(), isplit.data());
    if (info != 0 || m_found < n_modes)
        throw error("solve_axial: eigenvalue bisection failed");
    info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, diag.data(), offdiag.data(), n_modes, w.data(),
                          iblock.data(), isplit.data(), zvec.data(), n, ifail.data());
    if (info != 0) throw error("solve_axial: inverse iteration failed");

    std::vector<AxialMode> modes(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        AxialMode& mode = modes[k];
        mode.carrier = carrier;
        mode.index = k;
        mode.energy = w[k];
        mode.bound = w[k] < 0.0;
        mode.z = z;
        mode.samples.resize(n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            mode.samples[i] = zvec[static_cast<std::size_t>(k) * n + i];
            norm2 += mode.samples[i] * mode.samples[i] * hz;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        double sign = 0.0;  // fix a deterministic sign: first large lobe positive
        for (int i = 0; i < n && sign == 0.0; ++i)
            if (std::abs(mode.samples[i]) > 1e-3 * std::abs(inv)) sign = mode.samples[i] > 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) mode.samples[i] *= inv * (sign == 0.0 ? 1.0 : sign);
    }
    return modes;
}

TransitionRecord transition(const AxialMode& e_mode, const AxialMode& h_mode,
                            double radius, const MaterialParams& mat,
                            EmissionMedium medium, bool radial_linear_form) {
    mat.validate();
    if (e_mode.z.size() != h_mode.z.size() ||
        std::abs(e_mode.z[1] - e_mode.z[0] - (h_mode.z[1] - h_mode.z[0])) > 1e-12)
        throw validation_error("transition: modes on different grids");

    TransitionRecord rec;
    const double hz = e_mode.z[1] - e_mode.z[0];
    double overlap = 0.0;
    for (std::size_t i = 0; i < e_mode.z.size(); ++i)
        overlap += e_mode.samples[i] * h_mode.samples[i] * hz;
    rec.axial_overlap = overlap;

    const RadialMode re = solve_radial(radius, mat.m_e, 0, 1);
    const RadialMode rh = solve_radial(radius, mat.m_h, 0, 1);
    const double er = radial_linear_form ? re.energy_linear : re.energy_quadratic;
    const double hr = radial_linear_form ? rh.energy_linear : rh.energy_quadratic;

    rec.hbar_omega = mat.E_g_WZ + (e_mode.energy + er) + (h_mode.energy + hr);
    rec.omega = rec.hbar_omega * meV_to_radps;

    // d^2 = e^2 M^2 / (m0^2 omega^2) <Ze|Zh>^2, SI
    const double omega_si = rec.omega * 1e12;  // rad/s
    const double m2_joule_kg = mat.M2 * si::e_charge * si::m0;  // J kg
    const double d2 = si::e_charge * si::e_charge * m2_joule_kg * overlap * overlap /
                      (si::m0 * si::m0 * omega_si * omega_si);  // C^2 m^2
    rec.dipole = std::sqrt(d2) * 1e9;  // C nm

    double rate = d2 * std::pow(omega_si, 3) /
                  (3.0 * pi * si::eps0 * si::hbar * std::pow(si::c_light, 3));
    if (medium == EmissionMedium::refractive) rate *= mat.n_refr;
    rec.rate = rate;
    return rec;
}

DoubleDotModes solve_double_dot(double radius, const MaterialParams& mat, double l_zb1,
                                double l_wz, double l_zb2, double grid_step) {
    DeviceGeometry geom;
    geom.radius = radius;
    geom.grid_step = grid_step;
    geom.segments = {{CrystalPhase::ZB, l_zb1}, {CrystalPhase::WZ, l_wz},
                     {CrystalPhase::ZB, l_zb2}};
    const auto electrons = solve_axial(geom, mat, Carrier::electron, 2);
    const auto holes = solve_axial(geom, mat, Carrier::hole, 1);

    // |0> lives in the first dot, |1> in the second, assigned by localization.
    const double dot1_start = geom.padding, dot1_end = geom.padding + l_zb1;
    const double dot2_start = dot1_end + l_wz, dot2_end = dot2_start + l_zb2;
    DoubleDotModes dd;
    const double p0_in_1 = electrons[0].probability_in(dot1_start, dot1_end);
    const double p0_in_2 = electrons[0].probability_in(dot2_start, dot2_end);
    if (p0_in_1 >= p0_in_2) {
        dd.e0 = electrons[0];
        dd.e1 = electrons[1];
    } else {
        dd.e0 = electrons[1];
        dd.e1 = electrons[0];
    }
    dd.hole = holes[0];
    return dd;
}

EmissionSweepResult emission_sweep(double radius, const MaterialParams& mat,
                                   const std::vector<double>& l_zb1_values,
                                   const std::vector<double>& l_wz_values, double l_zb2,
                                   EmissionMedium medium) {
    EmissionSweepResult result;
    result.min_rate = std::numeric_limits<double>::infinity();
    result.max_rate = 0.0;
    for (double l1 : l_zb1_values)
        for (double lw : l_wz_values) {
            const auto dd = solve_double_dot(radius, mat, l1, lw, l_zb2);
            const auto t0 = transition(dd.e0, dd.hole, radius, mat, medium);
            const auto t1 = transition(dd.e1, dd.hole, radius, mat, medium);
            result.rows.push_back({l1, lw, l_zb2, t0.rate, t1.rate});
            result.min_rate = std::min({result.min_rate, t0.rate, t1.rate});
            result.max_rate = std::max({result.max_rate, t0.rate, t1.rate});
        }
    return result;
}

}  // namespace lqsim
