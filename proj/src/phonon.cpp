#include "lqsim/phonon.hpp"

#include <cmath>

#include "lqsim/constants.hpp"
#include "lqsim/quadrature.hpp"

namespace lqsim {

double bose_occupation(double energy_meV, double temperature_K) {
    if (energy_meV <= 0.0) throw validation_error("bose_occupation: energy must be positive");
    if (temperature_K <= 0.0) return 0.0;
    const double x = energy_meV / (kB_meV_per_K * temperature_K);
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

double phonon_k_cutoff(double min_feature_nm, double temperature_K,
                       const PhononBathParams& bath, const PhononGrid& grid) {
    const double k_feature = grid.k_max_factor / min_feature_nm;  // 1/nm
    const double k_thermal = kB_meV_per_K * temperature_K /
                             (hbar_meV_ps * bath.cs_nm_ps());     // 1/nm
    return std::max(k_feature, grid.k_thermal_factor * k_thermal);
}

FormFactorTable FormFactorTable::build(const AxialMode& a, const AxialMode& b,
                                       const RadialMode& radial, double k_max,
                                       const PhononGrid& grid) {
    if (a.z.size() != b.z.size())
        throw validation_error("FormFactorTable: grid mismatch");
    std::vector<double> density(a.z.size());
    for (std::size_t j = 0; j < a.z.size(); ++j) density[j] = a.samples[j] * b.samples[j];
    return build_from_density(a.z, density, radial, k_max, grid);
}

FormFactorTable FormFactorTable::build_from_density(const std::vector<double>& z,
                                                    const std::vector<double>& density_z,
                                                    const RadialMode& radial, double k_max,
                                                    const PhononGrid& grid) {
    if (z.size() != density_z.size() || z.size() < 2)
        throw validation_error("FormFactorTable: grid mismatch");
    if (k_max <= 0.0) throw validation_error("FormFactorTable: k_max <= 0");
    FormFactorTable table;
    table.m_k_max = k_max;
    table.m_dk = k_max / (grid.n_axial - 1);

    const double hz = z[1] - z[0];
    table.m_fz.resize(grid.n_axial);
    for (int i = 0; i < grid.n_axial; ++i) {
        const double kz = i * table.m_dk;
        Complex sum(0.0, 0.0);
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (density_z[j] != 0.0) sum += density_z[j] * std::exp(Complex(0.0, kz * z[j]));
        }
        table.m_fz[i] = sum * hz;
    }

    // F_perp(k) = int |R|^2 J0(k r) r dr, normalized so F_perp(0) = 1
    const double dk_perp = k_max / (grid.n_transverse - 1);
    const double dr = radial.radius / grid.n_radial;
    std::vector<double> density(grid.n_radial + 1);
    for (int i = 0; i <= grid.n_radial; ++i) {
        const double r = i * dr;
        const double v = radial.normalized_value(r);
        density[i] = v * v * r;
    }
    table.m_fperp.resize(grid.n_transverse);
    for (int i = 0; i < grid.n_transverse; ++i) {
        const double k = i * dk_perp;
        double sum = 0.0;
        for (int j = 0; j <= grid.n_radial; ++j) {
            const double w = (j == 0 || j == grid.n_radial) ? 0.5 : 1.0;
            sum += w * density[j] * std::cyl_bessel_j(0, k * j * dr);
        }
        table.m_fperp[i] = sum * dr;
    }
    // normalize out the radial quadrature residual so F(0) is exactly the
    // axial overlap
    const double f0 = table.m_fperp[0];
    for (auto& v : table.m_fperp) v /= f0;
    return table;
}

namespace {

template <typename T>
T interp(const std::vector<T>& values, double x, double dx) {
    const double u = x / dx;
    const int i = static_cast<int>(u);
    if (i < 0) throw validation_error("FormFactorTable: negative k");
    if (i + 1 >= static_cast<int>(values.size())) return T(0);  // beyond cutoff
    const double f = u - i;
    return values[i] * (1.0 - f) + values[i + 1] * f;
}

}  // namespace

Complex FormFactorTable::axial(double kz) const {
    const Complex v = interp(m_fz, std::abs(kz), m_dk);
    return kz >= 0.0 ? v : std::conj(v);
}

double FormFactorTable::transverse(double kperp) const {
    return interp(m_fperp, std::abs(kperp), m_k_max / (m_fperp.size() - 1));
}

double FormFactorTable::shell_average(double k, int n_theta) const {
    // 2 pi int_0^pi sin(th) |Fperp(k sin th) Fz(k cos th)|^2 dth, midpoint rule
    double sum = 0.0;
    const double dth = pi / n_theta;
    for (int i = 0; i < n_theta; ++i) {
        const double th = (i + 0.5) * dth;
        const double fp = transverse(k * std::sin(th));
        const double fz = std::abs(axial(k * std::cos(th)));
        sum += std::sin(th) * fp * fp * fz * fz;
    }
    return 2.0 * pi * sum * dth;
}

namespace {

double golden_rule_rate(const FormFactorTable& pair, double dE_meV,
                        const PhononBathParams& bath, const PhononGrid& grid,
                        bool emission) {
    bath.validate();
    if (dE_meV <= 0.0)
        throw validation_error("phonon rate: energy splitting must be positive");
    const double k_star_nm = dE_meV / (hbar_meV_ps * bath.cs_nm_ps());  // 1/nm
    const double shell = pair.shell_average(k_star_nm, grid.n_theta);
    const double n = bose_occupation(dE_meV, bath.T);
    const double occupancy = emission ? n + 1.0 : n;

    const double D = bath.De * si::e_charge;  // J
    const double k_star = k_star_nm * 1e9;    // 1/m
    return D * D * std::pow(k_star, 3) * occupancy * shell /
           (8.0 * pi * pi * bath.rho_mass * bath.cs * bath.cs * si::hbar);
}

}  // namespace

double phonon_emission_rate(const FormFactorTable& pair, double dE_meV,
                            const PhononBathParams& bath, const PhononGrid& grid) {
    return golden_rule_rate(pair, dE_meV, bath, grid, true);
}

double phonon_absorption_rate(const FormFactorTable& pair, double dE_meV,
                              const PhononBathParams& bath, const PhononGrid& grid) {
    return golden_rule_rate(pair, dE_meV, bath, grid, false);
}

FormFactorTable build_displacement_table(const AxialMode& a, const AxialMode& b,
                                         const RadialMode& radial, double k_max,
                                         const PhononGrid& grid) {
    if (a.z.size() != b.z.size())
        throw validation_error("build_displacement_table: grid mismatch");
    std::vector<double> delta(a.z.size());
    for (std::size_t j = 0; j < a.z.size(); ++j)
        delta[j] = a.samples[j] * a.samples[j] - b.samples[j] * b.samples[j];
    return FormFactorTable::build_from_density(a.z, delta, radial, k_max, grid);
}

SpectralDensity spectral_density(const FormFactorTable& pair, const PhononBathParams& bath,
                                 const PhononGrid& grid) {
    bath.validate();
    SpectralDensity sd;
    const double D = bath.De * si::e_charge;
    const double pref = D * D / (2.0 * bath.rho_mass * bath.cs * bath.cs * si::hbar *
                                 std::pow(2.0 * pi, 3));  // SI, per k^3 S(k)
    const int n = grid.n_k;
    sd.nu.resize(n);
    sd.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double k_nm = pair.k_max() * (i + 1) / n;
        const double k = k_nm * 1e9;
        const double nu_si = bath.cs * k;                      // rad/s
        const double j_si = pref * std::pow(k, 3) * pair.shell_average(k_nm, grid.n_theta);
        sd.nu[i] = nu_si * 1e-12;      // rad/ps
        sd.values[i] = j_si * 1e-12;   // 1/ps
    }
    return sd;
}

double franck_condon(const FormFactorTable& displacement, const PhononBathParams& bath,
                     double temperature_K, const PhononGrid& grid) {
    bath.validate();
    if (temperature_K <= 0.0)
        throw validation_error("franck_condon: temperature must be positive");
    const double D = bath.De * si::e_charge;
    const double pref = D * D / (2.0 * bath.rho_mass * bath.cs * bath.cs * si::hbar *
                                 std::pow(2.0 * pi, 3));
    // exponent = 1/2 int nu^-2 J(nu) coth(hbar nu/2kT) dnu over the shell
    // reduction; integrate in k (nu = c_s k)
    const double kT = si::kB * temperature_K;  // J
    const auto integrand = [&](double k_nm) {
        if (k_nm <= 0.0) return 0.0;
        const double k = k_nm * 1e9;
        const double nu = bath.cs * k;  // rad/s
        const double j = pref * std::pow(k, 3) * displacement.shell_average(k_nm, grid.n_theta);
        const double x = si::hbar * nu / (2.0 * kT);
        const double coth = x > 350.0 ? 1.0 : 1.0 / std::tanh(x);
        return j / (nu * nu) * coth * bath.cs * 1e9;  // dnu = c_s * dk_nm * 1e9
    };
    const double exponent =
        0.5 * integrate_adaptive(integrand, 0.0, displacement.k_max(), 1e-9, 1e-30);
    if (!std::isfinite(exponent))
        throw integrator_error("franck_condon: divergent exponent (bad spectral grid)");
    return std::exp(-exponent);
}

DephasingResult dephasing_rate(double dot_length_nm, double radius_nm,
                               const MaterialParams& mat, const PhononBathParams& bath,
                               double temperature_K, const PhononGrid& grid) {
    bath.validate();
    if (temperature_K <= 0.0)
        throw validation_error("dephasing_rate: temperature must be positive");
    DeviceGeometry geom;
    geom.radius = radius_nm;
    geom.segments = {{CrystalPhase::ZB, dot_length_nm}};
    geom.padding = 50.0;
    const auto modes = solve_axial(geom, mat, Carrier::electron, 2);
    const RadialMode radial = solve_radial(radius_nm, mat.m_e, 0, 1);

    DephasingResult res;
    res.temperature = temperature_K;
    res.gap_meV = modes[1].energy - modes[0].energy;
    res.gap_warning = res.gap_meV < 10.0 * kB_meV_per_K * temperature_K;

    const double k_max = phonon_k_cutoff(dot_length_nm, temperature_K, bath, grid);
    const auto table = FormFactorTable::build(modes[0], modes[1], radial, k_max, grid);

    const double omega01 = res.gap_meV * meV_to_radps * 1e12;  // rad/s
    const double D = bath.De * si::e_charge;
    const double pref = pi * std::pow(D, 4) /
                        (2.0 * std::pow(2.0 * pi, 6) * bath.rho_mass * bath.rho_mass *
                         std::pow(bath.cs, 3) * si::hbar * si::hbar * omega01 * omega01);

    // 1D radial k-quadrature of k^6 * 2 n(n+1) * S01(k)^2 (SI k).  The Bose
    // bracket cuts everything beyond ~50 thermal wavevectors, so the grid is
    // concentrated there at low temperature.
    const double cs_nm = bath.cs_nm_ps();
    const double k_thermal = kB_meV_per_K * temperature_K / (hbar_meV_ps * cs_nm);
    const double k_hi = std::min(k_max, 50.0 * k_thermal);
    double sum = 0.0;
    const double dk_nm = k_hi / grid.n_k;
    for (int i = 0; i < grid.n_k; ++i) {
        const double k_nm = (i + 0.5) * dk_nm;
        const double e_meV = hbar_meV_ps * cs_nm * k_nm;
        const double n = bose_occupation(e_meV, temperature_K);
        if (n <= 0.0) continue;
        const double s = table.shell_average(k_nm, grid.n_theta);
        sum += std::pow(k_nm * 1e9, 6) * 2.0 * n * (n + 1.0) * s * s * dk_nm * 1e9;
    }
    res.gamma_dp = pref * sum;
    res.tau_dp = res.gamma_dp > 0.0 ? 1.0 / res.gamma_dp
                                    : std::numeric_limits<double>::infinity();
    return res;
}

}  // namespace lqsim
