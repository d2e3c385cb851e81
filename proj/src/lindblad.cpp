#include "lqsim/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace lqsim {

Matrix dissipator(const CollapseChannel& channel, const Matrix& rho) {
    if (channel.op.rows() != rho.rows() || rho.rows() != rho.cols())
        throw validation_error("dissipator: shape mismatch");
    const Matrix& l = channel.op;
    const Matrix ldl = l.adjoint() * l;
    return channel.rate * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
}

namespace {

Matrix single_entry(int dim, int row, int col) {
    Matrix m = Matrix::Zero(dim, dim);
    m(row, col) = 1.0;
    return m;
}

Matrix projector(int dim, int idx) { return single_entry(dim, idx, idx); }

}  // namespace

std::vector<CollapseChannel> build_collapse_set(SystemLayout layout,
                                                const DecoherenceRates& rates) {
    rates.validate();
    std::vector<CollapseChannel> set;
    if (layout == SystemLayout::lambda3) {
        // Basis {|0>, |X->, |1>}
        set.emplace_back(rates.gamma_sp_0, single_entry(3, 0, 1));
        set.emplace_back(rates.gamma_sp_1, single_entry(3, 2, 1));
        set.emplace_back(rates.gamma_dp, projector(3, 0));
        set.emplace_back(rates.gamma_dp, projector(3, 2));
        return set;
    }
    if (layout == SystemLayout::register15) {
        // Control {|0c>, |X01c>, |1c>, |X12c>, |2c>} (x) target {|0t>, |Xt>, |1t>},
        // control-major: index = 3*c + t.
        const std::vector<int> dims{5, 3};
        // Emission: each exciton level decays to the dot on its left (sp_0
        // rate) and on its right (sp_1 rate).
        const auto emit_c = [&](int to, int from, double rate) {
            set.emplace_back(rate, embed_operator(single_entry(5, to, from), dims, 0));
        };
        emit_c(0, 1, rates.gamma_sp_0);  // X01c -> 0c
        emit_c(2, 1, rates.gamma_sp_1);  // X01c -> 1c
        emit_c(2, 3, rates.gamma_sp_0);  // X12c -> 1c
        emit_c(4, 3, rates.gamma_sp_1);  // X12c -> 2c
        set.emplace_back(rates.gamma_sp_0, embed_operator(single_entry(3, 0, 1), dims, 1));
        set.emplace_back(rates.gamma_sp_1, embed_operator(single_entry(3, 2, 1), dims, 1));
        // Dephasing: one projector per single-particle state, summed over the
        // co-factor.  (The SI prints its Diag(0,0,1,...) example in the
        // opposite, target-major order; with our control-major convention
        // dephasing of |1c> is diagonal with ones at indices 6,7,8.)
        for (int c = 0; c < 5; ++c)
            set.emplace_back(rates.gamma_dp, embed_operator(projector(5, c), dims, 0));
        for (int t = 0; t < 3; ++t)
            set.emplace_back(rates.gamma_dp, embed_operator(projector(3, t), dims, 1));
        return set;
    }
    throw validation_error("build_collapse_set: unknown layout");
}

namespace {

// Channel structure is exploited in the inner loop: emission operators have a
// single entry and dephasing operators are diagonal, so only genuinely dense
// operators pay for matrix products.  The anticommutator halves are folded
// into one precomputed matrix.
struct PreparedChannels {
    struct Single {  // rate * |val|^2 * rho_bb on entry (a,a)
        double weight;
        int a, b;
    };
    struct Diagonal {  // rate * d (.) rho (.) d*
        double rate;
        Vector d;
    };
    struct Dense {
        double rate;
        Matrix l;
    };
    std::vector<Single> singles;
    std::vector<Diagonal> diagonals;
    std::vector<Dense> denses;
    Matrix gain_half;  // sum_c rate_c/2 L_c^+ L_c
};

PreparedChannels prepare_channels(const std::vector<CollapseChannel>& channels, int dim) {
    PreparedChannels p;
    p.gain_half = Matrix::Zero(dim, dim);
    for (const auto& ch : channels) {
        if (ch.op.rows() != dim)
            throw validation_error("integrate: channel dimension mismatch");
        if (ch.rate == 0.0) continue;
        p.gain_half += 0.5 * ch.rate * (ch.op.adjoint() * ch.op);

        int nnz = 0, row = -1, col = -1;
        bool diagonal = true;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (ch.op(i, j) != Complex(0.0)) {
                    ++nnz;
                    row = i;
                    col = j;
                    if (i != j) diagonal = false;
                }
        if (nnz == 1) {
            p.singles.push_back({ch.rate * std::norm(ch.op(row, col)), row, col});
        } else if (diagonal) {
            p.diagonals.push_back({ch.rate, ch.op.diagonal()});
        } else {
            p.denses.push_back({ch.rate, ch.op});
        }
    }
    return p;
}

Matrix rhs(const std::function<Matrix(double)>& hamiltonian,
           const PreparedChannels& ch, double t, const Matrix& rho) {
    const Complex I(0.0, 1.0);
    const Matrix h = hamiltonian(t);
    Matrix d = -I * (h * rho - rho * h);
    d.noalias() -= ch.gain_half * rho;
    d.noalias() -= rho * ch.gain_half;
    for (const auto& s : ch.singles) d(s.a, s.a) += s.weight * rho(s.b, s.b);
    for (const auto& dg : ch.diagonals) {
        const int n = static_cast<int>(rho.rows());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d(i, j) += dg.rate * dg.d(i) * std::conj(dg.d(j)) * rho(i, j);
    }
    for (const auto& dn : ch.denses)
        d.noalias() += dn.rate * (dn.l * rho * dn.l.adjoint());
    return d;
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1,
                  double atol, double rtol) {
    double sum = 0.0;
    const int n = static_cast<int>(err.size());
    for (int i = 0; i < n; ++i) {
        const double scale =
            atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
        const double e = std::abs(err.data()[i]) / scale;
        sum += e * e;
    }
    return std::sqrt(sum / n);
}

// Invariant thresholds are stated for the default tolerances and scale up
// when a caller deliberately integrates coarser.
void validate_output_state(const Matrix& rho, double rel_tol) {
    const double f = std::max(1.0, rel_tol / 1e-9);
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 * f || std::abs(rho.trace().imag()) > 1e-8 * f)
        throw integrator_error("integrate: trace drifted beyond tolerance");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, f))
        throw integrator_error("integrate: hermiticity drifted beyond tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint().eval()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8 * f)
        throw integrator_error("integrate: negative eigenvalue beyond tolerance");
}

}  // namespace

Trajectory integrate(const std::function<Matrix(double)>& hamiltonian,
                     const std::vector<CollapseChannel>& channels,
                     const DensityMatrix& rho0,
                     const IntegratorConfig& cfg,
                     const Matrix* ideal_reference) {
    if (cfg.output_times.size() < 2)
        throw validation_error("integrate: need at least two output times");
    if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end()))
        throw validation_error("integrate: output times not increasing");
    if (cfg.rel_tol <= 0.0 || cfg.abs_tol <= 0.0)
        throw validation_error("integrate: tolerances must be positive");

    const int dim = rho0.dim();
    const PreparedChannels prepared = prepare_channels(channels, dim);
    if (ideal_reference && ideal_reference->rows() != dim)
        throw validation_error("integrate: ideal reference dimension mismatch");

    const double t_start = cfg.output_times.front();
    const double t_end = cfg.output_times.back();
    const double span = t_end - t_start;
    const double max_step = cfg.max_step > 0.0 ? cfg.max_step : span / 50.0;
    const double h_min = std::max(1e-14 * span, 1e-300);

    Trajectory traj;
    traj.populations.resize(dim);
    const auto record = [&](double t, const Matrix& rho) {
        validate_output_state(rho, cfg.rel_tol);
        traj.times.push_back(t);
        traj.states.push_back(rho);
        for (int i = 0; i < dim; ++i) traj.populations[i].push_back(rho(i, i).real());
        if (ideal_reference)
            traj.fidelity.push_back(
                jozsa_fidelity(sanitize_state(rho), sanitize_state(*ideal_reference)));
    };

    Matrix y = rho0.matrix();
    double t = t_start;
    record(t, y);

    Matrix k1 = rhs(hamiltonian, prepared, t, y);
    double h = std::min(max_step, span / 100.0);

    std::size_t next_out = 1;
    while (next_out < cfg.output_times.size()) {
        const double t_target = cfg.output_times[next_out];
        // Stretch by up to ~1% to land exactly on the output time instead of
        // leaving an unintegrable sliver behind.
        double hs = h;
        bool clamped = false;
        if (t + 1.01 * hs >= t_target) {
            hs = t_target - t;
            clamped = true;
        }
        if (!clamped && hs < h_min)
            throw integrator_error("integrate: step size underflow");
        if (clamped && hs <= 0.0) {  // duplicate output time
            record(t_target, y);
            ++next_out;
            continue;
        }

        const Matrix k2 = rhs(hamiltonian, prepared, t + c2 * hs, y + hs * (a21 * k1));
        const Matrix k3 = rhs(hamiltonian, prepared, t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        const Matrix k4 =
            rhs(hamiltonian, prepared, t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix k5 = rhs(hamiltonian, prepared, t + c5 * hs,
                              y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix k6 = rhs(hamiltonian, prepared, t + hs,
                              y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Matrix y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix k7 = rhs(hamiltonian, prepared, t + hs, y_new);
        const Matrix err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, y_new, cfg.abs_tol, cfg.rel_tol);
        if (std::isnan(en)) throw integrator_error("integrate: step control failed (nan)");
        const double factor =
            std::clamp(0.9 * std::pow(en > 0.0 ? 1.0 / en : 1e8, 0.2), 0.2, 5.0);
        if (en <= 1.0) {
            y = y_new;
            k1 = k7;  // FSAL
            if (clamped) {
                t = t_target;
                record(t, y);
                ++next_out;
                // resume from the natural step, not the clamped sliver
                h = std::min(std::max(h, hs * factor), max_step);
            } else {
                t += hs;
                h = std::min(hs * factor, max_step);
            }
        } else {
            h = hs * factor;
        }
    }
    return traj;
}

}  // namespace lqsim
