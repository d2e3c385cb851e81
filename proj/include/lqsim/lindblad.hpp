#pragma once

#include <functional>
#include <vector>

#include "lqsim/qcore.hpp"

namespace lqsim {

// One Lindblad channel: rate Gamma and process operator L.
struct CollapseChannel {
    double rate = 0.0;  // 1/ps
    Matrix op;

    CollapseChannel(double r, Matrix l) : rate(r), op(std::move(l)) {
        if (rate < 0.0) throw validation_error("CollapseChannel: negative rate");
        if (op.rows() != op.cols()) throw validation_error("CollapseChannel: op not square");
    }
};

// Spontaneous emission from the exciton level plus pure dephasing of the
// location states.  Defaults: upper-bound gamma_sp on both channels and
// tau_dp = 6 us.
struct DecoherenceRates {
    double gamma_sp_0 = 7.79e-4;   // 1/ps, |X-> -> |0>
    double gamma_sp_1 = 7.79e-4;   // 1/ps, |X-> -> |1>
    double gamma_dp = 1.0 / 6e6;   // 1/ps, location-state dephasing

    static DecoherenceRates none() { return {0.0, 0.0, 0.0}; }
    void validate() const {
        if (gamma_sp_0 < 0 || gamma_sp_1 < 0 || gamma_dp < 0)
            throw validation_error("DecoherenceRates: negative rate");
    }
};

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = 0.0;              // ps; 0 = span/50
    std::vector<double> output_times;   // increasing; defines the span
};

struct Trajectory {
    std::vector<double> times;                      // ps
    std::vector<Matrix> states;                     // validated at output times
    std::vector<std::vector<double>> populations;   // [basis][time]
    std::vector<double> fidelity;                   // vs ideal reference, may be empty

    const Matrix& final_state() const { return states.back(); }
    double final_fidelity() const { return fidelity.back(); }
};

enum class SystemLayout { lambda3, register15 };

// D(Gamma, L) rho = Gamma (L rho L+ - 1/2 {L+L, rho})
Matrix dissipator(const CollapseChannel& channel, const Matrix& rho);

// lambda3: emission |X->->|0>, |X->->|1> and dephasing projectors on |0>, |1>.
// register15: per-level emission from each exciton level to its two ground
// levels plus one dephasing projector per single-particle state (5+3), giving
// 14 channels.  See qregister.hpp for the index convention.
std::vector<CollapseChannel> build_collapse_set(SystemLayout layout,
                                                const DecoherenceRates& rates);

// Adaptive embedded Dormand-Prince 5(4) integration of
//   d rho/dt = -i [H(t), rho] + sum_c D(Gamma_c, L_c) rho.
// Steps are clamped to land exactly on the requested output times, where the
// state is validated (trace 1e-8, hermiticity 1e-10, min eigenvalue -1e-8).
// An optional ideal reference fills Trajectory::fidelity.
Trajectory integrate(const std::function<Matrix(double)>& hamiltonian,
                     const std::vector<CollapseChannel>& channels,
                     const DensityMatrix& rho0,
                     const IntegratorConfig& cfg,
                     const Matrix* ideal_reference = nullptr);

}  // namespace lqsim
