#include "lqsim/qregister.hpp"

#include <cmath>

#include "lqsim/quadrature.hpp"

namespace lqsim {

using RL = RegisterLayout;

double CoulombShiftModel::interaction(int c, int t) const {
    if (c == RL::c2) {
        if (t == RL::t0) return s0;
        if (t == RL::tX) return sX;
        return s1;
    }
    return residual;
}

void CoulombShiftModel::validate() const {
    if (s0 < 0 || sX < 0 || s1 < 0 || residual < 0)
        throw validation_error("CoulombShiftModel: negative shift");
    if (s0 <= s1)
        throw validation_error("CoulombShiftModel: s0 must exceed s1 (no differential shift, no gate)");
}

void CnotSchedule::validate() const {
    shifts.validate();
    for (const auto& s : steps) s.validate();
    if (steps[0].window_end() > steps[1].window_start() + 1e-12 ||
        steps[1].window_end() > steps[2].window_start() + 1e-12)
        throw validation_error("CnotSchedule: step windows overlap");
    const double fwhm = 2.355 * steps[1].sigma_p;
    if (fwhm <= 4.0)
        throw validation_error("CnotSchedule: step-2 FWHM must exceed 4 ps");
    // Spectral resolvability of the conditional shift: pulse bandwidth
    // (angular FWHM 2.355/sigma) must sit well below the differential shift.
    const double bandwidth = 2.355 / steps[1].sigma_p;
    const double min_shift = std::min(shifts.s0 - shifts.s1, shifts.sX);
    if (bandwidth >= min_shift)
        throw validation_error("CnotSchedule: step-2 drive spectrally unresolved");
}

namespace {

// Static-gauge 3x3 target Hamiltonian of a wrong (non-resonant) block:
// diag(0, DeltaX, delta2) plus the real envelopes.  Used for the spectator
// phase quadrature; the time-dependent build uses the oscillating gauge.
Eigen::Matrix3d wrong_block_static(const GateSpec& step2, const CoulombShiftModel& sh,
                                   int c, double t) {
    const double u0 = sh.interaction(c, RL::t0) - sh.s0;
    const double uX = sh.interaction(c, RL::tX) - sh.sX;
    const double u1 = sh.interaction(c, RL::t1) - sh.s1;
    const double deltaX = step2.delta + uX - u0;
    const double delta2 = u1 - u0;  // two-photon mismatch; s0 - s1 for 0c/1c
    const double w0 = step2.envelope0().value(t);
    const double w1 = step2.envelope1().value(t);
    Eigen::Matrix3d h;
    h << 0, w0, 0,
         w0, deltaX, w1,
         0, w1, delta2;
    return h;
}

}  // namespace

std::array<double, 2> CnotSchedule::spectator_phases() const {
    const GateSpec& s2 = steps[1];
    // Adiabatic branch eigenvalues of the |0c> block, tracked by basis
    // dominance; the |1t> branch is referenced to its static offset delta2 so
    // the integrand vanishes outside the pulse.
    const auto branch = [&](int basis_index, double t) {
        const Eigen::Matrix3d h = wrong_block_static(s2, shifts, RL::c0, t);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
        int best = 0;
        double best_w = -1.0;
        for (int i = 0; i < 3; ++i) {
            const double w = std::abs(es.eigenvectors()(basis_index, i));
            if (w > best_w) {
                best_w = w;
                best = i;
            }
        }
        return es.eigenvalues()(best);
    };
    const double delta2 = shifts.interaction(RL::c0, RL::t1) - shifts.s1 -
                          (shifts.interaction(RL::c0, RL::t0) - shifts.s0);
    const double a = s2.window_start(), b = s2.window_end();
    const double th0 = -integrate_adaptive([&](double t) { return branch(0, t); }, a, b, 1e-10);
    const double th1 =
        -integrate_adaptive([&](double t) { return branch(2, t) - delta2; }, a, b, 1e-10);
    return {th0, th1};
}

Matrix build_register_hamiltonian(int step, const CnotSchedule& schedule,
                                  const CoulombShiftModel& shifts, double t) {
    if (step < 1 || step > 3) throw validation_error("build_register_hamiltonian: step must be 1..3");
    const GateSpec& spec = schedule.steps[step - 1];
    Matrix h = Matrix::Zero(RL::dim, RL::dim);
    const Complex I(0.0, 1.0);

    if (step == 2) {
        const double w0 = spec.envelope0().value(t);
        const double w1 = spec.envelope1().value(t);
        const Complex e_alpha = std::exp(I * spec.alpha);
        for (int c = 0; c < RL::control_dim; ++c) {
            const int i0 = RL::index(c, RL::t0);
            const int iX = RL::index(c, RL::tX);
            const int i1 = RL::index(c, RL::t1);
            const double u0 = shifts.interaction(c, RL::t0) - shifts.s0;
            const double uX = shifts.interaction(c, RL::tX) - shifts.sX;
            const double u1 = shifts.interaction(c, RL::t1) - shifts.s1;
            h(iX, iX) = spec.delta + uX - u0;
            // beam-0 static in every block; beam-1 carries the block's
            // two-photon mismatch as a phase (zero in the |2c> block)
            h(i0, iX) = w0 * e_alpha;
            h(iX, i0) = w0 * std::conj(e_alpha);
            const double mismatch = u1 - u0;
            const Complex twist = std::exp(-I * mismatch * (t - spec.t_center));
            h(iX, i1) = w1 * twist;
            h(i1, iX) = w1 * std::conj(twist);
        }
        return h;
    }

    // Steps 1/3: control Lambda {|1c>, |X12c>, |2c>} (x) target identity.
    const double w0 = spec.envelope0().value(t);
    const double w1 = spec.envelope1().value(t);
    const Complex e_alpha = std::exp(I * spec.alpha);
    for (int tt = 0; tt < RL::target_dim; ++tt) {
        const int iL = RL::index(RL::c1, tt);
        const int iX = RL::index(RL::cX12, tt);
        const int iR = RL::index(RL::c2, tt);
        h(iX, iX) = spec.delta;
        h(iL, iX) = w0 * e_alpha;
        h(iX, iL) = w0 * std::conj(e_alpha);
        Complex twist(1.0, 0.0);
        if (schedule.target_backaction) {
            // Physical back-action: the |2c> level is shifted by U(2c, t)
            // while the target electron sits there, detuning the control
            // Raman resonance.  Neglected by default, as the 3-step scheme
            // assumes.
            const double mismatch = shifts.residual - shifts.interaction(RL::c2, tt);
            twist = std::exp(-I * mismatch * (t - spec.t_center));
        }
        h(iX, iR) = w1 * twist;
        h(iR, iX) = w1 * std::conj(twist);
    }
    return h;
}

CnotSchedule schedule_cnot(const CnotGateParams& params, const CoulombShiftModel& shifts) {
    shifts.validate();
    CnotSchedule sched;
    sched.shifts = shifts;
    sched.target_backaction = params.target_backaction;

    const double gap = params.gap >= 0.0
        ? params.gap
        : std::max(params.sigma_control, params.sigma_target);
    sched.gap12 = sched.gap23 = gap;

    GateSpec control;
    control.alpha = 0.0;
    control.beta = 0.25 * M_PI;
    control.gamma = M_PI;
    control.omega_rms_max = params.omega_control;
    control.sigma_p = params.sigma_control;
    control.delta = invert_detuning(params.omega_control, params.sigma_control, M_PI);
    control.t_center = 3.0 * params.sigma_control;

    GateSpec target;
    target.alpha = M_PI;  // -x axis; see CnotSchedule docs
    target.beta = 0.25 * M_PI;
    target.gamma = M_PI;
    target.omega_rms_max = params.omega_target;
    target.sigma_p = params.sigma_target;
    target.delta = invert_detuning(params.omega_target, params.sigma_target, M_PI);
    target.t_center = control.window_end() + gap + 3.0 * params.sigma_target;

    GateSpec back = control;
    back.t_center = target.window_end() + gap + 3.0 * params.sigma_control;

    sched.steps = {control, target, back};
    if (shifts.s0 < 10.0 * params.omega_target || shifts.sX < 10.0 * params.omega_target)
        sched.warnings.push_back(
            "Coulomb shift below 10x the step-2 Rabi frequency; block selectivity "
            "rests on the two-photon mismatch alone");
    sched.validate();
    return sched;
}

PureState ideal_cnot(const PureState& in) {
    if (in.dim() != RL::dim) throw validation_error("ideal_cnot: expected a 15-dim state");
    Vector out = in.amplitudes();
    double outside = 0.0;
    for (int i = 0; i < RL::dim; ++i) {
        bool comp = false;
        for (int k : RL::computational()) comp = comp || (i == k);
        if (!comp) outside += std::norm(out(i));
    }
    if (outside > 1e-9)
        throw validation_error("ideal_cnot: support outside the computational subspace");
    std::swap(out(RL::index(RL::c1, RL::t0)), out(RL::index(RL::c1, RL::t1)));
    return PureState(out);
}

Matrix ideal_cnot(const Matrix& rho) {
    if (rho.rows() != RL::dim || rho.cols() != RL::dim)
        throw validation_error("ideal_cnot: expected a 15x15 density matrix");
    double outside = 0.0;
    for (int i = 0; i < RL::dim; ++i) {
        bool comp = false;
        for (int k : RL::computational()) comp = comp || (i == k);
        if (!comp) outside += rho(i, i).real();
    }
    if (outside > 1e-9)
        throw validation_error("ideal_cnot: support outside the computational subspace");
    Matrix u = Matrix::Identity(RL::dim, RL::dim);
    const int a = RL::index(RL::c1, RL::t0), b = RL::index(RL::c1, RL::t1);
    u(a, a) = u(b, b) = 0.0;
    u(a, b) = u(b, a) = 1.0;
    return u * rho * u.adjoint();
}

PureState register_basis_state(int c, int t) {
    Vector v = Vector::Zero(RL::dim);
    v(RL::index(c, t)) = 1.0;
    return PureState(v);
}

PureState register_state(const std::array<Complex, 4>& amplitudes) {
    Vector v = Vector::Zero(RL::dim);
    const auto comp = RL::computational();
    double norm2 = 0.0;
    for (int i = 0; i < 4; ++i) norm2 += std::norm(amplitudes[i]);
    for (int i = 0; i < 4; ++i) v(comp[i]) = amplitudes[i] / std::sqrt(norm2);
    return PureState(v);
}

Trajectory simulate_cnot(const DensityMatrix& rho0, const CnotSchedule& schedule,
                         const DecoherenceRates& rates, IntegratorConfig cfg) {
    schedule.validate();
    if (rho0.dim() != RL::dim) throw validation_error("simulate_cnot: expected a 15-dim state");
    double excited = 0.0;
    for (int c = 0; c < RL::control_dim; ++c)
        for (int t = 0; t < RL::target_dim; ++t)
            if (c == RL::cX01 || c == RL::cX12 || t == RL::tX)
                excited += rho0.population(RL::index(c, t));
    if (excited > 1e-9)
        throw validation_error("simulate_cnot: excited-level population above 1e-9");

    const Matrix ideal = ideal_cnot(rho0.matrix());

    // Output frame: remove the deterministic |0c>-block spectator phases (and
    // nothing else).  K is diagonal, so populations are untouched.
    const auto theta = schedule.spectator_phases();
    Vector k = Vector::Ones(RL::dim);
    k(RL::index(RL::c0, RL::t0)) = std::exp(Complex(0.0, -theta[0]));
    k(RL::index(RL::c0, RL::t1)) = std::exp(Complex(0.0, -theta[1]));

    // Segment boundaries: three pulse windows separated by free gaps.
    struct Segment {
        double t0, t1;
        int step;  // 0 = gap
    };
    const auto& st = schedule.steps;
    const std::vector<Segment> segments = {
        {st[0].window_start(), st[0].window_end(), 1},
        {st[0].window_end(), st[1].window_start(), 0},
        {st[1].window_start(), st[1].window_end(), 2},
        {st[1].window_end(), st[2].window_start(), 0},
        {st[2].window_start(), st[2].window_end(), 3},
    };

    const auto channels = build_collapse_set(SystemLayout::register15, rates);
    const double rel = cfg.rel_tol, abs = cfg.abs_tol;
    const double sanitize_tol = 1e-8 * std::max(1.0, rel / 1e-9);

    Trajectory full;
    full.populations.resize(RL::dim);
    Matrix state = rho0.matrix();
    const int points_per_pulse = 41, points_per_gap = 5;

    for (const auto& seg : segments) {
        if (seg.t1 <= seg.t0 + 1e-12) continue;
        IntegratorConfig seg_cfg;
        seg_cfg.rel_tol = rel;
        seg_cfg.abs_tol = abs;
        const int n = seg.step == 0 ? points_per_gap : points_per_pulse;
        for (int i = 0; i < n; ++i)
            seg_cfg.output_times.push_back(seg.t0 + (seg.t1 - seg.t0) * i / (n - 1));
        if (seg.step != 0) {
            seg_cfg.max_step =
                cfg.max_step > 0.0 ? cfg.max_step : schedule.steps[seg.step - 1].sigma_p / 20.0;
        }
        const int step = seg.step;
        const auto h = [step, &schedule](double t) -> Matrix {
            if (step == 0) return Matrix::Zero(RL::dim, RL::dim);
            return build_register_hamiltonian(step, schedule, schedule.shifts, t);
        };
        const auto traj = integrate(h, channels, sanitize_state(state, sanitize_tol), seg_cfg);
        const std::size_t skip = full.times.empty() ? 0 : 1;  // drop shared boundary
        for (std::size_t i = skip; i < traj.times.size(); ++i) {
            const Matrix corrected =
                k.asDiagonal() * traj.states[i] * k.conjugate().asDiagonal();
            full.times.push_back(traj.times[i]);
            full.states.push_back(corrected);
            for (int b = 0; b < RL::dim; ++b)
                full.populations[b].push_back(corrected(b, b).real());
            full.fidelity.push_back(jozsa_fidelity(sanitize_state(corrected, sanitize_tol),
                                                   sanitize_state(ideal)));
        }
        state = traj.final_state();
    }
    return full;
}

}  // namespace lqsim
