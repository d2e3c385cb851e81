#include "lqsim/qcore.hpp"

#include <cmath>

namespace lqsim {

namespace {

void check_hermitian(const Matrix& m, double tol, const char* what) {
    if (m.rows() != m.cols())
        throw validation_error(std::string(what) + ": matrix not square");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw validation_error(std::string(what) + ": not Hermitian within tolerance");
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : m_rho(std::move(m)) {
    if (m_rho.rows() < 1) throw validation_error("DensityMatrix: empty");
    check_hermitian(m_rho, 1e-12, "DensityMatrix");
    if (std::abs(m_rho.trace().real() - 1.0) > 1e-10 || std::abs(m_rho.trace().imag()) > 1e-10)
        throw validation_error("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw validation_error("DensityMatrix: negative eigenvalue beyond tolerance");
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    PureState p(psi);  // validates normalization
    return DensityMatrix(p.amplitudes() * p.amplitudes().adjoint());
}

PureState::PureState(Vector amps) : m_amps(std::move(amps)) {
    if (m_amps.size() < 1) throw validation_error("PureState: empty");
    if (std::abs(m_amps.squaredNorm() - 1.0) > 1e-12)
        throw validation_error("PureState: not normalized");
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

RotationTarget::RotationTarget(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (n < 1e-12) throw validation_error("RotationTarget: zero axis");
    m_axis = axis / n;
    if (angle <= 0.0 || angle >= 2.0 * M_PI)
        throw validation_error("RotationTarget: angle outside (0, 2*pi)");
    if (angle > M_PI) {
        m_axis = -m_axis;
        m_angle = 2.0 * M_PI - angle;
    } else {
        m_angle = angle;
    }
}

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    // Eigenvalues at the solver's noise floor would contribute sqrt(eps)-sized
    // terms; zero them together with tolerated negatives.
    const double floor = 1e-14 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9) throw validation_error("psd_sqrt: matrix not PSD within tolerance");
        if (ev(i) < floor) ev(i) = 0.0;
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

double jozsa_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim())
        throw validation_error("jozsa_fidelity: dimension mismatch");
    const Matrix s = psd_sqrt(rho1.matrix());
    const Matrix inner = s * rho2.matrix() * s;
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    const double floor = 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double tr = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double ev = es.eigenvalues()(i);
        if (ev < -1e-9) throw validation_error("jozsa_fidelity: inner matrix not PSD");
        if (ev < floor) ev = 0.0;
        tr += std::sqrt(ev);
    }
    const double f = tr * tr;
    return f > 1.0 ? std::min(f, 1.0 + 1e-9) : f;
}

namespace {

// Indices of the qubit block for dim 2 and the lambda layout {|0>,|X->,|1>}.
std::pair<int, int> qubit_indices(int dim) {
    if (dim == 2) return {0, 1};
    if (dim == 3) return {0, 2};
    throw validation_error("bloch_vector: expected dim 2 or 3");
}

}  // namespace

BlochVector bloch_vector(const DensityMatrix& rho) {
    const auto [i0, i1] = qubit_indices(rho.dim());
    if (rho.dim() == 3) {
        const double leak = rho.population(1);
        if (leak > 1e-6)
            throw validation_error("bloch_vector: excited-state population above 1e-6");
    }
    const Complex r01 = rho.matrix()(i0, i1);
    BlochVector s;
    s.x = 2.0 * r01.real();
    s.y = -2.0 * r01.imag();
    s.z = rho.matrix()(i0, i0).real() - rho.matrix()(i1, i1).real();
    return s;
}

BlochVector bloch_vector(const PureState& psi) {
    return bloch_vector(psi.density());
}

Eigen::Matrix2cd rotation_unitary(const Vec3& axis, double gamma) {
    const double n = axis.norm();
    if (std::abs(n - 1.0) > 1e-12)
        throw validation_error("rotation_unitary: axis not normalized");
    const Complex I(0.0, 1.0);
    Eigen::Matrix2cd ns;
    ns << axis.z(), Complex(axis.x(), -axis.y()),
          Complex(axis.x(), axis.y()), -axis.z();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd p_plus = 0.5 * (id + ns);
    const Eigen::Matrix2cd p_minus = 0.5 * (id - ns);
    return p_minus + std::exp(I * gamma) * p_plus;
}

PureState ideal_rotation(const Vec3& axis, double gamma, const PureState& in) {
    if (in.dim() != 2) throw validation_error("ideal_rotation: expected a 2-level state");
    return PureState(rotation_unitary(axis, gamma) * in.amplitudes());
}

PureState ideal_rotation(const RotationTarget& target, const PureState& in) {
    return ideal_rotation(target.axis(), target.angle(), in);
}

Matrix embed_operator(const Matrix& op, const std::vector<int>& dims, int position) {
    if (position < 0 || position >= static_cast<int>(dims.size()))
        throw validation_error("embed_operator: position out of range");
    if (op.rows() != op.cols() || op.rows() != dims[position])
        throw validation_error("embed_operator: operator shape does not match slot");
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        const Matrix& factor = (i == position)
            ? op
            : static_cast<const Matrix&>(Matrix::Identity(dims[i], dims[i]));
        Matrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (int r = 0; r < out.rows(); ++r)
            for (int c = 0; c < out.cols(); ++c)
                next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) =
                    out(r, c) * factor;
        out = std::move(next);
    }
    return out;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, int keep) {
    if (dims.size() != 2) throw validation_error("partial_trace: expected two factors");
    const int da = dims[0], db = dims[1];
    if (rho.rows() != da * db || rho.cols() != da * db)
        throw validation_error("partial_trace: shape mismatch");
    if (keep == 0) {
        Matrix out = Matrix::Zero(da, da);
        for (int a = 0; a < da; ++a)
            for (int ap = 0; ap < da; ++ap)
                for (int b = 0; b < db; ++b)
                    out(a, ap) += rho(a * db + b, ap * db + b);
        return out;
    }
    if (keep == 1) {
        Matrix out = Matrix::Zero(db, db);
        for (int b = 0; b < db; ++b)
            for (int bp = 0; bp < db; ++bp)
                for (int a = 0; a < da; ++a)
                    out(b, bp) += rho(a * db + b, a * db + bp);
        return out;
    }
    throw validation_error("partial_trace: keep must be 0 or 1");
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix d = a - b;
    check_hermitian(d, 1e-9, "trace_distance");
    d = 0.5 * (d + d.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix sanitize_state(const Matrix& rho, double tol) {
    Matrix h = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol) throw validation_error("sanitize_state: negative eigenvalue beyond tolerance");
        if (ev(i) < 0.0) ev(i) = 0.0;
    }
    Matrix out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix(out / out.trace().real());
}

DensityMatrix project_onto_qubit(const DensityMatrix& rho) {
    if (rho.dim() != 3) throw validation_error("project_onto_qubit: expected dim 3");
    Matrix p = rho.matrix();
    p.row(1).setZero();
    p.col(1).setZero();
    const double tr = p.trace().real();
    if (tr < 0.5) throw validation_error("project_onto_qubit: state mostly outside qubit span");
    return DensityMatrix(p / tr);
}

}  // namespace lqsim
