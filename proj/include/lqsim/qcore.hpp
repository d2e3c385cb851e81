#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lqsim/errors.hpp"

namespace lqsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

// Hermitian, trace-1, positive-semidefinite matrix.  Validation tolerances:
// hermiticity 1e-12 elementwise, trace 1e-10, eigenvalues >= -1e-9.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m);
    static DensityMatrix pure(const Vector& psi);

    int dim() const { return static_cast<int>(m_rho.rows()); }
    const Matrix& matrix() const { return m_rho; }
    double population(int i) const { return m_rho(i, i).real(); }

private:
    Matrix m_rho;
};

// Normalized state vector (squared norm = 1 within 1e-12).
class PureState {
public:
    explicit PureState(Vector amps);

    int dim() const { return static_cast<int>(m_amps.size()); }
    const Vector& amplitudes() const { return m_amps; }
    Complex operator[](int i) const { return m_amps(i); }
    DensityMatrix density() const { return DensityMatrix::pure(m_amps); }

private:
    Vector m_amps;
};

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const;
};

// Rotation axis and angle for a single-qubit gate.  The axis carries the
// laser phase alpha (azimuth = -alpha) and the amplitude ratio beta
// (polar angle = 2*beta); gamma is the rotation angle in (0, pi].
// Effective angles in (pi, 2*pi) are folded to (2*pi - gamma, -axis).
class RotationTarget {
public:
    RotationTarget(const Vec3& axis, double angle);

    const Vec3& axis() const { return m_axis; }
    double angle() const { return m_angle; }

private:
    Vec3 m_axis;
    double m_angle;
};

// (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.  Symmetric; equals |<psi|phi>|^2
// for pure arguments.  Matrix square roots via Hermitian eigendecomposition,
// eigenvalues in [-1e-9, 0) clamped to 0.
double jozsa_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Pauli expectations of the qubit block.  Accepts dim-2 states directly and
// dim-3 lambda-system states (basis {|0>, |X->, |1>}, qubit on indices 0, 2).
// Throws if population outside the qubit span exceeds 1e-6.
BlochVector bloch_vector(const DensityMatrix& rho);
BlochVector bloch_vector(const PureState& psi);

// The rotation oracle every fidelity curve is measured against: the
// axis-aligned spinor component gains relative phase e^{+i gamma}.
// Equivalently U = P_anti + e^{+i gamma} P_aligned.  Accepts any real angle.
PureState ideal_rotation(const Vec3& axis, double gamma, const PureState& in);
PureState ideal_rotation(const RotationTarget& target, const PureState& in);
Eigen::Matrix2cd rotation_unitary(const Vec3& axis, double gamma);

// Kronecker embedding of an operator acting on factor `position` of a
// register with the given factor dimensions (first factor = slowest index).
Matrix embed_operator(const Matrix& op, const std::vector<int>& dims, int position);

// Partial trace keeping factor `keep` of a two-factor register dims[0] x dims[1].
Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, int keep);

// 1/2 ||rho - sigma||_1 via Hermitian eigenvalues.
double trace_distance(const Matrix& a, const Matrix& b);

// Hermitian PSD square root with the clamping rule used by jozsa_fidelity.
Matrix psd_sqrt(const Matrix& m);

// Hermitizes, clamps eigenvalues in [-tol, 0) to zero and renormalizes the
// trace; throws below -tol.  Reconciles integrator output (PSD within 1e-8)
// with the stricter DensityMatrix contract when states are chained or
// compared.
DensityMatrix sanitize_state(const Matrix& rho, double tol = 1e-8);

// Projects a lambda-system state onto span{|0>,|1>} and renormalizes;
// used when chaining gate simulations (residual |X-> leakage ~1e-6 after a
// truncated pulse would otherwise violate the next gate's precondition).
DensityMatrix project_onto_qubit(const DensityMatrix& rho);

}  // namespace lqsim
