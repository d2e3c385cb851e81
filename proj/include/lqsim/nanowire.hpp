#pragma once

#include <string>
#include <vector>

#include "lqsim/qcore.hpp"

namespace lqsim {

enum class CrystalPhase { WZ, ZB };
enum class Carrier { electron, hole };

// Cylindrical WZ/ZB heterostructure: radius plus ordered axial segments,
// padded on both ends with barrier material (barrier as seen by the carrier
// being solved: WZ for electrons, ZB for holes).
struct DeviceGeometry {
    double radius = 10.0;     // nm
    std::vector<std::pair<CrystalPhase, double>> segments;  // (phase, length nm)
    double padding = 50.0;    // nm each end
    double grid_step = 0.05;  // nm

    double total_length() const;
    void validate() const;
};

// Table S1 values for InP.
struct MaterialParams {
    double m_e = 0.067;       // m0
    double m_h = 0.64;        // m0
    double E_g_ZB = 1410.0;   // meV
    double E_g_WZ = 1474.0;   // meV
    double dc = 129.0;        // meV, conduction band offset
    double dv = 65.0;         // meV, valence band offset
    double M2 = 10.35;        // eV * m0, momentum matrix element
    double n_refr = 3.44;

    void validate() const;
};

// Axial eigenfunction on the finite-difference grid.  Energies are measured
// from the carrier's barrier band edge (WZ conduction band for electrons, WZ
// valence band for holes), so bound states have negative energy.
struct AxialMode {
    Carrier carrier = Carrier::electron;
    int index = 0;
    double energy = 0.0;           // meV
    bool bound = true;             // energy below the barrier edge
    std::vector<double> z;         // nm
    std::vector<double> samples;   // L2-normalized, ints |Z|^2 dz = 1

    // probability in [z0, z1]
    double probability_in(double z0, double z1) const;
};

// Radial mode of the infinite cylindrical well, R ~ J_m(kappa r).
struct RadialMode {
    int m = 0;
    int l = 1;
    double kappa = 0.0;         // 1/nm
    double bessel_zero = 0.0;   // j_{m,l}
    double energy_linear = 0.0;     // hbar^2/(2 m r^2) * j_{m,l}   (as printed)
    double energy_quadratic = 0.0;  // hbar^2/(2 m r^2) * j_{m,l}^2 (standard)
    double radius = 0.0;        // nm

    double normalized_value(double r) const;
};

struct TransitionRecord {
    double hbar_omega = 0.0;     // meV
    double omega = 0.0;          // rad/ps
    double dipole = 0.0;         // C nm
    double rate = 0.0;           // 1/s
    double axial_overlap = 0.0;  // <Z_e | Z_h>
};

// l-th zero of J_m via bracketed Newton iterations.
double bessel_zero(int m, int l);

// Whether the medium factor n enters the emission formula.  The printed SI
// formula is the vacuum one (default); Table S1 tabulates n, so the medium
// form is kept switchable for comparison.
enum class EmissionMedium { vacuum, refractive };

RadialMode solve_radial(double radius, double mass_m0, int m, int l);

// Three-point finite differences with Dirichlet ends; wells of depth dc in ZB
// for electrons and dv in WZ for holes.  Returns the lowest n_modes states.
std::vector<AxialMode> solve_axial(const DeviceGeometry& geom, const MaterialParams& mat,
                                   Carrier carrier, int n_modes = 4);

// hbar omega = E_g,WZ + E_e + E_h with the radial ground energies included
// (paper-mode linear radial energy by default); d^2 = e^2 M^2 <Ze|Zh>^2 / (m0 omega)^2;
// Gamma_sp = n * d^2 omega^3 / (3 pi eps0 hbar c^3) for medium = refractive.
// The wire radius supplies the shared radial context (kappa is mass
// independent, so the radial overlap is exactly 1).
TransitionRecord transition(const AxialMode& e_mode, const AxialMode& h_mode,
                            double radius, const MaterialParams& mat,
                            EmissionMedium medium = EmissionMedium::vacuum,
                            bool radial_linear_form = true);

struct EmissionSweepRow {
    double l_zb1, l_wz, l_zb2;  // nm
    double rate0, rate1;        // 1/s, |0> and |1> transitions
};

struct EmissionSweepResult {
    std::vector<EmissionSweepRow> rows;
    double min_rate = 0.0, max_rate = 0.0;  // 1/s over both transitions
};

// SI sweep: l_ZB2 fixed, grids over l_ZB1 and l_WZ.
EmissionSweepResult emission_sweep(double radius, const MaterialParams& mat,
                                   const std::vector<double>& l_zb1_values,
                                   const std::vector<double>& l_wz_values,
                                   double l_zb2 = 19.0,
                                   EmissionMedium medium = EmissionMedium::vacuum);

// Convenience: the two lowest electron modes of a double-dot structure,
// labeled |0> = localized in the first ZB segment, |1> = in the second.
struct DoubleDotModes {
    AxialMode e0, e1;   // location states
    AxialMode hole;     // hole ground state in the central WZ well
};
DoubleDotModes solve_double_dot(double radius, const MaterialParams& mat,
                                double l_zb1, double l_wz, double l_zb2,
                                double grid_step = 0.05);

}  // namespace lqsim
