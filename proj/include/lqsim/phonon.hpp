#pragma once

#include "lqsim/nanowire.hpp"

namespace lqsim {

// Deformation coupling to bulk 3D LA phonons.  Literature values for InP;
// the paper does not state its bath constants, so all downstream rates are
// order-of-magnitude reproductions (documented in the README).
struct PhononBathParams {
    double De = 6.0;         // eV, deformation coupling constant
    double rho_mass = 4810;  // kg/m^3
    double cs = 4594;        // m/s
    double T = 4.0;          // K

    void validate() const {
        if (De <= 0 || rho_mass <= 0 || cs <= 0 || T <= 0)
            throw validation_error("PhononBathParams: all parameters must be positive");
    }
    double cs_nm_ps() const { return cs * 1e-3; }
};

// Quadrature density knobs; the convergence invariant doubles these.
struct PhononGrid {
    int n_axial = 2048;      // k_z table points
    int n_radial = 400;      // r-quadrature points for F_perp
    int n_transverse = 1024; // k_perp table points
    int n_theta = 64;        // polar points per spherical shell
    int n_k = 800;           // radial k points of 1D rate integrals
    double k_max_factor = 15.0;      // k_max >= factor / L_min
    double k_thermal_factor = 10.0;  // k_max >= factor * k_B T/(hbar c_s)
};

// Sampled |<a| e^{i k r} |b>| factorization F_perp(k_perp) * F_z(k_z) for one
// pair of states sharing the radial ground mode.  k in 1/nm.
class FormFactorTable {
public:
    static FormFactorTable build(const AxialMode& a, const AxialMode& b,
                                 const RadialMode& radial, double k_max,
                                 const PhononGrid& grid = {});
    // Generic axial density rho(z) on a grid (used for the displacement
    // coupling, where rho = Za^2 - Zb^2).
    static FormFactorTable build_from_density(const std::vector<double>& z,
                                              const std::vector<double>& density,
                                              const RadialMode& radial, double k_max,
                                              const PhononGrid& grid = {});

    Complex axial(double kz) const;       // F(-k) = conj(F(k))
    double transverse(double kperp) const;
    Complex value(double kz, double kperp) const { return axial(kz) * transverse(kperp); }
    double k_max() const { return m_k_max; }
    // integral over the unit sphere of |F(k Omega)|^2
    double shell_average(double k, int n_theta = 64) const;

private:
    double m_k_max = 0.0;
    double m_dk = 0.0;
    std::vector<Complex> m_fz;
    std::vector<double> m_fperp;
};

struct SpectralDensity {
    std::vector<double> nu;      // rad/ps
    std::vector<double> values;  // 1/ps
};

struct DephasingResult {
    double gamma_dp = 0.0;  // 1/s
    double tau_dp = 0.0;    // s
    double temperature = 0.0;
    double gap_meV = 0.0;   // hbar omega_01
    bool gap_warning = false;  // gap < 10 k_B T: virtual-transition picture suspect
};

// Bose occupation with expm1 stability; energy in meV.
double bose_occupation(double energy_meV, double temperature_K);

// Fermi-golden-rule LA-phonon emission/absorption between two localized
// states at energy splitting dE (emission releases dE > 0):
//   gamma = D^2 k*^3 [n_B + {1,0}] S(k*) / (8 pi^2 rho c_s^2 hbar),
// with k* = dE/(hbar c_s) and S the shell integral of |F|^2.  Result in 1/s.
double phonon_emission_rate(const FormFactorTable& pair, double dE_meV,
                            const PhononBathParams& bath, const PhononGrid& grid = {});
double phonon_absorption_rate(const FormFactorTable& pair, double dE_meV,
                              const PhononBathParams& bath, const PhononGrid& grid = {});

// J_PH(nu) = sum_k |g_k|^2 delta(nu - nu_k) reduced to the |k| = nu/c_s
// shell.  The supplied table decides which coupling: for the Franck-Condon
// factor use the displacement difference of the two charge configurations
// (see build_displacement_table).
SpectralDensity spectral_density(const FormFactorTable& pair, const PhononBathParams& bath,
                                 const PhononGrid& grid = {});

// F_11 - F_00: the difference of the two location states' couplings.  The
// SI's printed g_k uses the cross element <1|e^{ikr}|0>, which vanishes for
// well-separated dots and would force B = 1 identically, contradicting its
// own Fig S5; the displacement form is the standard Franck-Condon coupling.
FormFactorTable build_displacement_table(const AxialMode& a, const AxialMode& b,
                                         const RadialMode& radial, double k_max,
                                         const PhononGrid& grid = {});

// B = exp(-1/2 int nu^-2 J(nu) coth(hbar nu / 2 kB T) d nu)
double franck_condon(const FormFactorTable& displacement, const PhononBathParams& bath,
                     double temperature_K, const PhononGrid& grid = {});

// Quadratic-coupling pure dephasing via virtual elastic scattering off the
// lowest excited dot state.  The quantization volume cancels against the two
// continuum sums, leaving
//   gamma_dp = pi D^4 / (2 (2pi)^6 rho^2 c_s^3 hbar^2 omega01^2)
//              * int dk k^6 2 n(n+1) S01(k)^2.
DephasingResult dephasing_rate(double dot_length_nm, double radius_nm,
                               const MaterialParams& mat, const PhononBathParams& bath,
                               double temperature_K, const PhononGrid& grid = {});

// Shared helper: k-space cutoff max(k_max_factor/L_min, thermal factor).
double phonon_k_cutoff(double min_feature_nm, double temperature_K,
                       const PhononBathParams& bath, const PhononGrid& grid = {});

}  // namespace lqsim
