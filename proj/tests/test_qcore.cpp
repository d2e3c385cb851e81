#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lqsim/qcore.hpp"

using namespace lqsim;

namespace {

std::mt19937_64 rng(20260810);

Vector random_pure(int dim) {
    std::normal_distribution<double> g;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    return v / v.norm();
}

DensityMatrix random_mixed(int dim) {
    std::normal_distribution<double> g;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    Matrix rho = a * a.adjoint();
    return DensityMatrix(rho / rho.trace().real());
}

const Vector ket0 = (Vector(2) << 1, 0).finished();
const Vector ket1 = (Vector(2) << 0, 1).finished();
const Vector ket_plus = (Vector(2) << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)).finished();

}  // namespace

TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix::pure(ket0));
    Matrix bad = Matrix::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix{bad}, validation_error);
    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 0) = 0.5; nonherm(1, 1) = 0.5; nonherm(0, 1) = Complex(0.3, 0.1);
    CHECK_THROWS_AS(DensityMatrix{nonherm}, validation_error);
    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.1; negative(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix{negative}, validation_error);
}

TEST_CASE("jozsa fidelity basic values") {
    const auto r0 = DensityMatrix::pure(ket0);
    const auto r1 = DensityMatrix::pure(ket1);
    const auto rp = DensityMatrix::pure(ket_plus);
    CHECK(jozsa_fidelity(r0, r0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(jozsa_fidelity(r0, r1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(jozsa_fidelity(rp, r0) == doctest::Approx(0.5).epsilon(1e-10));
    for (int i = 0; i < 20; ++i) {
        const auto a = random_mixed(3);
        CHECK(jozsa_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS_AS(jozsa_fidelity(r0, random_mixed(3)), validation_error);
}

TEST_CASE("jozsa fidelity equals squared overlap on pure pairs") {
    for (int i = 0; i < 1000; ++i) {
        const Vector a = random_pure(2), b = random_pure(2);
        const double overlap = std::norm(a.dot(b));
        const double f = jozsa_fidelity(DensityMatrix::pure(a), DensityMatrix::pure(b));
        CHECK(f == doctest::Approx(overlap).epsilon(1e-9));
    }
}

TEST_CASE("jozsa fidelity symmetric and bounded") {
    for (int i = 0; i < 50; ++i) {
        const auto a = random_mixed(3), b = random_mixed(3);
        const double fab = jozsa_fidelity(a, b), fba = jozsa_fidelity(b, a);
        CHECK(fab == doctest::Approx(fba).epsilon(1e-9));
        CHECK(fab >= 0.0);
        CHECK(fab <= 1.0 + 1e-9);
    }
}

TEST_CASE("bloch vector reference points") {
    auto s = bloch_vector(PureState(ket0));
    CHECK(s.x == doctest::Approx(0.0)); CHECK(s.y == doctest::Approx(0.0));
    CHECK(s.z == doctest::Approx(1.0));
    s = bloch_vector(PureState(ket_plus));
    CHECK(s.x == doctest::Approx(1.0)); CHECK(s.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.z == doctest::Approx(0.0).epsilon(1e-12));
    s = bloch_vector(DensityMatrix(0.5 * Matrix::Identity(2, 2)));
    CHECK(s.norm() == doctest::Approx(0.0).epsilon(1e-12));
    // +i state points along +y
    Vector plus_i(2);
    plus_i << 1 / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
    CHECK(bloch_vector(PureState(plus_i)).y == doctest::Approx(1.0));
}

TEST_CASE("bloch vector rejects leaky lambda states") {
    Matrix rho = Matrix::Zero(3, 3);
    rho(0, 0) = 0.9989; rho(1, 1) = 1.1e-3; rho(2, 2) = 1 - 0.9989 - 1.1e-3;
    CHECK_THROWS_AS(bloch_vector(DensityMatrix{rho}), validation_error);
    Matrix ok = Matrix::Zero(3, 3);
    ok(0, 0) = 1.0;
    const auto s = bloch_vector(DensityMatrix{ok});
    CHECK(s.z == doctest::Approx(1.0));
}

TEST_CASE("ideal rotation: X, identity, T sign convention") {
    const PureState zero(ket0);
    // gamma = pi about x maps |0> -> |1> up to global phase
    const auto flipped = ideal_rotation(Vec3(1, 0, 0), M_PI, zero);
    CHECK(std::norm(flipped[1]) == doctest::Approx(1.0).epsilon(1e-12));
    // gamma = 0 is the identity
    for (int i = 0; i < 10; ++i) {
        const Vector v = random_pure(2);
        const auto out = ideal_rotation(Vec3(0, 1, 0), 0.0, PureState(v));
        CHECK(std::norm(out.amplitudes().dot(v)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // gamma = pi/4 about -z adds e^{+i pi/4} on |1>: the T gate
    const auto t_out = ideal_rotation(Vec3(0, 0, -1), M_PI / 4, PureState(ket_plus));
    const Complex rel = t_out[1] / t_out[0];
    CHECK(std::arg(rel) == doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("ideal rotation: norm preservation and composition") {
    std::uniform_real_distribution<double> ang(0.0, M_PI);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        Vec3 n(g(rng), g(rng), g(rng));
        n.normalize();
        const double g1 = ang(rng), g2 = ang(rng);
        const PureState in(random_pure(2));
        const auto once = ideal_rotation(n, g1, ideal_rotation(n, g2, in));
        const auto composed = ideal_rotation(n, g1 + g2, in);
        CHECK(once.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::norm(once.amplitudes().dot(composed.amplitudes())) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("X twice and T eight times return the input") {
    for (int i = 0; i < 25; ++i) {
        const PureState in(random_pure(2));
        auto xx = ideal_rotation(Vec3(1, 0, 0), M_PI, ideal_rotation(Vec3(1, 0, 0), M_PI, in));
        CHECK(jozsa_fidelity(xx.density(), in.density()) == doctest::Approx(1.0).epsilon(1e-10));
        PureState t8 = in;
        for (int k = 0; k < 8; ++k) t8 = ideal_rotation(Vec3(0, 0, -1), M_PI / 4, t8);
        CHECK(jozsa_fidelity(t8.density(), in.density()) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("rotation target folds angles beyond pi") {
    const RotationTarget t(Vec3(0, 1, 0), 1.5 * M_PI);
    CHECK(t.angle() == doctest::Approx(0.5 * M_PI));
    CHECK(t.axis().y() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(RotationTarget(Vec3(1, 0, 0), 0.0), validation_error);
    CHECK_THROWS_AS(RotationTarget(Vec3(0, 0, 0), 1.0), validation_error);
}

TEST_CASE("embed_operator") {
    const std::vector<int> dims{5, 3};
    // identity anywhere stays identity
    CHECK((embed_operator(Matrix::Identity(3, 3), dims, 1) -
           Matrix::Identity(15, 15)).norm() == doctest::Approx(0.0));
    // generic 3-dim operator lands in kron(I5, A)
    Matrix a = Matrix::Random(3, 3);
    const Matrix emb = embed_operator(a, dims, 1);
    CHECK(emb.rows() == 15);
    for (int c = 0; c < 5; ++c)
        CHECK((emb.block(3 * c, 3 * c, 3, 3) - a).norm() == doctest::Approx(0.0));
    // |2c><2c| projector: ones exactly on the three indices of the |2c> block,
    // checked by brute-force index enumeration
    Matrix p = Matrix::Zero(5, 5);
    p(4, 4) = 1.0;
    const Matrix pe = embed_operator(p, dims, 0);
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) {
            const double expected = (i == j && i / 3 == 4) ? 1.0 : 0.0;
            CHECK(std::abs(pe(i, j) - expected) < 1e-15);
        }
    CHECK_THROWS_AS(embed_operator(a, dims, 0), validation_error);
}

TEST_CASE("partial trace and trace distance") {
    const Vector va = random_pure(5), vb = random_pure(3);
    Vector prod(15);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 3; ++b) prod(3 * a + b) = va(a) * vb(b);
    const Matrix rho = prod * prod.adjoint();
    const Matrix ra = partial_trace(rho, {5, 3}, 0);
    const Matrix rb = partial_trace(rho, {5, 3}, 1);
    CHECK((ra - va * va.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rb - vb * vb.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(trace_distance(ra, ra) == doctest::Approx(0.0));
    const Matrix r0 = ket0 * ket0.adjoint(), r1 = ket1 * ket1.adjoint();
    CHECK(trace_distance(r0, r1) == doctest::Approx(1.0));
}
