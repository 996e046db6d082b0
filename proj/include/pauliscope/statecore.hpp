// statecore.hpp: two-qubit states in Pauli (s, t, C) and 4x4 matrix form
//
// Conventions
//   * computational basis |00>, |01>, |10>, |11>; the sigma qubit is the left
//     tensor factor, so sigma_a = pauli_a (x) 1 and tau_b = 1 (x) pauli_b;
//   * state-adapted axes 1, 2, 3 are embedded as x, y, z by every constructor;
//   * P = 1/4 (1 + sigma.s + t.tau + sigma.C.tau).

#pragma once

#include "types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace pauliscope {

namespace detail {

inline std::array<Eigen::Matrix2cd, 3> single_paulis() {
    const cplx i{0.0, 1.0};
    Eigen::Matrix2cd x, y, z;
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, -i, i, 0.0;
    z << 1.0, 0.0, 0.0, -1.0;
    return {x, y, z};
}

inline CMat4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    CMat4 out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return out;
}

} // namespace detail

/// sigma_k (x) 1 for k = 0, 1, 2 (x, y, z).
inline const CMat4& sigma_op(int k) {
    static const std::array<CMat4, 3> ops = [] {
        const auto p = detail::single_paulis();
        const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
        return std::array<CMat4, 3>{detail::kron(p[0], one), detail::kron(p[1], one),
                                    detail::kron(p[2], one)};
    }();
    return ops.at(static_cast<std::size_t>(k));
}

/// 1 (x) tau_k for k = 0, 1, 2.
inline const CMat4& tau_op(int k) {
    static const std::array<CMat4, 3> ops = [] {
        const auto p = detail::single_paulis();
        const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
        return std::array<CMat4, 3>{detail::kron(one, p[0]), detail::kron(one, p[1]),
                                    detail::kron(one, p[2])};
    }();
    return ops.at(static_cast<std::size_t>(k));
}

/// The 15 real parameters of a Hermitian unit-trace two-qubit operator.
/// Positivity is not implied; see criteria.hpp.
struct PauliRep {
    BlochVector s = Vec3::Zero();
    BlochVector t = Vec3::Zero();
    CrossDyadic c = Mat3::Zero();

    bool all_finite() const { return s.allFinite() && t.allFinite() && c.allFinite(); }

    /// Largest absolute entrywise difference over s, t and C.
    double distance(const PauliRep& o) const {
        return std::max({(s - o.s).cwiseAbs().maxCoeff(), (t - o.t).cwiseAbs().maxCoeff(),
                         (c - o.c).cwiseAbs().maxCoeff()});
    }

    static PauliRep chaotic() { return {}; }
};

// ---------------------------------------------------------------------------
// matrix helpers

inline double hermiticity_defect(const CMat4& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline double trace_defect(const CMat4& m) { return std::abs(m.trace() - cplx{1.0, 0.0}); }

/// Ascending eigenvalues of the Hermitian part of `m`.
inline Vec4 spectrum(const CMat4& m) {
    const CMat4 h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat4> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eigenvalue(const CMat4& m) { return spectrum(m)(0); }

/// A validated 4x4 density-matrix-shaped operator: Hermitian with unit trace.
/// Positivity is checked separately.
class DensityMatrix {
public:
    explicit DensityMatrix(const CMat4& m, double tol = default_tol) : m_(m) {
        if (!m.allFinite())
            throw invalid_input("density matrix has non-finite entries");
        if (const double h = hermiticity_defect(m); h > tol)
            throw invalid_input("matrix is not Hermitian (defect " + std::to_string(h) + ")", h);
        if (const double d = trace_defect(m); d > tol)
            throw invalid_input("matrix trace differs from 1 (defect " + std::to_string(d) + ")", d);
    }

    /// Wraps a matrix already known to be Hermitian with unit trace.
    static DensityMatrix trusted(const CMat4& m) { return DensityMatrix(m, tag{}); }

    const CMat4& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }
    Vec4 eigenvalues() const { return spectrum(m_); }

private:
    struct tag {};
    DensityMatrix(const CMat4& m, tag) : m_(m) {}
    CMat4 m_;
};

// ---------------------------------------------------------------------------
// conversions

/// sigma.s + t.tau + sigma.C.tau in the computational basis (equals 4P - 1).
inline CMat4 pauli_part(const PauliRep& p) {
    CMat4 x = CMat4::Zero();
    for (int a = 0; a < 3; ++a) {
        x += p.s(a) * sigma_op(a);
        x += p.t(a) * tau_op(a);
        for (int b = 0; b < 3; ++b)
            x += p.c(a, b) * (sigma_op(a) * tau_op(b));
    }
    return x;
}

/// Matrix of 1/4 (1 + sigma.s + t.tau + sigma.C.tau) without a validity check.
inline CMat4 to_operator(const PauliRep& p) {
    CMat4 m = 0.25 * (CMat4::Identity() + pauli_part(p));
    // exact Hermitian symmetry regardless of summation order
    return 0.5 * (m + m.adjoint());
}

inline DensityMatrix to_matrix(const PauliRep& p) {
    if (!p.all_finite())
        throw invalid_input("Pauli representation has non-finite entries");
    return DensityMatrix::trusted(to_operator(p));
}

inline PauliRep from_operator(const CMat4& m) {
    PauliRep p;
    for (int a = 0; a < 3; ++a) {
        p.s(a) = (sigma_op(a) * m).trace().real();
        p.t(a) = (tau_op(a) * m).trace().real();
        for (int b = 0; b < 3; ++b)
            p.c(a, b) = (sigma_op(a) * tau_op(b) * m).trace().real();
    }
    return p;
}

inline PauliRep from_matrix(const DensityMatrix& m) { return from_operator(m.matrix()); }

/// Validates Hermiticity and trace before extracting s, t and C.
inline PauliRep from_matrix(const CMat4& m, double tol = default_tol) {
    return from_matrix(DensityMatrix(m, tol));
}

/// K = 1 - 4P, traceless Hermitian.
inline CMat4 k_operator(const PauliRep& p) {
    CMat4 k = -pauli_part(p);
    return 0.5 * (k + k.adjoint());
}

// ---------------------------------------------------------------------------
// named states

/// Generic pure state 1/4 (1 + p s1 - p t1 - s1t1 - q s2t2 - q s3t3), q = sqrt(1 - p^2).
inline PauliRep pure_state(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw domain_error("pure_state parameter must lie in [0, 1]");
    const double q = std::sqrt(1.0 - p * p);
    PauliRep r;
    r.s = Vec3(p, 0.0, 0.0);
    r.t = Vec3(-p, 0.0, 0.0);
    r.c.diagonal() = Vec3(-1.0, -q, -q);
    return r;
}

inline PauliRep bell_state() { return pure_state(0.0); }

/// 1/4 (1 - x sigma.tau); positive for -1/3 <= x <= 1.
inline PauliRep werner_state(double x) {
    if (!(x >= -1.0 / 3.0 && x <= 1.0))
        throw domain_error("werner_state parameter must lie in [-1/3, 1]");
    PauliRep r;
    r.c = -x * Mat3::Identity();
    return r;
}

/// Rank-2 family 1/4 (1 + (s3 + x t3) sin th + (s1t1 - x s2t2) cos th + x s3t3).
inline PauliRep rank2_state(double x, double theta) {
    if (!(x > -1.0 && x < 1.0))
        throw domain_error("rank2_state requires -1 < x < 1");
    if (!std::isfinite(theta))
        throw domain_error("rank2_state angle must be finite");
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    PauliRep r;
    r.s = Vec3(0.0, 0.0, sn);
    r.t = Vec3(0.0, 0.0, x * sn);
    r.c.diagonal() = Vec3(cs, -x * cs, x);
    return r;
}

/// 1/2 (1 + sigma.s) (x) 1/2 (1 + t.tau).
inline PauliRep product_state(const BlochVector& s, const BlochVector& t) {
    constexpr double slack = 1e-12;
    if (!s.allFinite() || !t.allFinite())
        throw invalid_input("product_state vectors must be finite");
    if (s.norm() > 1.0 + slack || t.norm() > 1.0 + slack)
        throw domain_error("product_state Bloch vectors must have length <= 1");
    PauliRep r;
    r.s = s;
    r.t = t;
    r.c = s * t.transpose();
    return r;
}

// ---------------------------------------------------------------------------
// local transformations

/// A pair of proper rotations acting on the sigma and tau frames.
class LocalRotation {
public:
    LocalRotation() = default;

    LocalRotation(const Mat3& r_sigma, const Mat3& r_tau, double tol = default_tol)
        : r_sigma_(r_sigma), r_tau_(r_tau) {
        check(r_sigma, "sigma", tol);
        check(r_tau, "tau", tol);
    }

    const Mat3& r_sigma() const { return r_sigma_; }
    const Mat3& r_tau() const { return r_tau_; }

    /// `outer` after `inner`.
    friend LocalRotation compose(const LocalRotation& outer, const LocalRotation& inner) {
        LocalRotation r;
        r.r_sigma_ = outer.r_sigma_ * inner.r_sigma_;
        r.r_tau_ = outer.r_tau_ * inner.r_tau_;
        return r;
    }

private:
    static void check(const Mat3& r, const char* which, double tol) {
        if (!r.allFinite())
            throw invalid_input(std::string("non-finite ") + which + " rotation");
        if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
            throw domain_error(std::string(which) + " rotation is not orthogonal");
        if (std::abs(r.determinant() - 1.0) > tol)
            throw domain_error(std::string(which) + " rotation is improper (det != +1)");
    }

    Mat3 r_sigma_ = Mat3::Identity();
    Mat3 r_tau_ = Mat3::Identity();
};

inline PauliRep apply_local(const PauliRep& p, const LocalRotation& r) {
    PauliRep out;
    out.s = r.r_sigma() * p.s;
    out.t = r.r_tau() * p.t;
    out.c = r.r_sigma() * p.c * r.r_tau().transpose();
    return out;
}

/// sigma_k <-> tau_k.
inline PauliRep swap_qubits(const PauliRep& p) {
    PauliRep out;
    out.s = p.t;
    out.t = p.s;
    out.c = p.c.transpose();
    return out;
}

/// Frobenius norm of P (1 - P); zero exactly for pure-state projectors.
inline double purity_defect(const CMat4& m) {
    return (m * (CMat4::Identity() - m)).norm();
}

inline double purity_defect(const PauliRep& p) { return purity_defect(to_operator(p)); }

// ---------------------------------------------------------------------------
// the magic-type basis

/// Columns are the basis vectors, in computational coordinates, of the
/// representation where sigma_k and tau_k are imaginary antisymmetric and
/// sigma_k tau_k is diagonal:
///   b1 = |Psi+>, b2 = -i |Phi+>, b3 = |Phi->, b4 = -i |Psi->
/// with Psi(+/-) = (|01> +/- |10>)/sqrt2 and Phi(+/-) = (|00> +/- |11>)/sqrt2.
inline const CMat4& magic_basis() {
    static const CMat4 v = [] {
        const double h = 1.0 / std::sqrt(2.0);
        const cplx i{0.0, 1.0};
        CMat4 m;
        m << 0.0, -i * h, h, 0.0,
             h, 0.0, 0.0, -i * h,
             h, 0.0, 0.0, i * h,
             0.0, -i * h, -h, 0.0;
        return m;
    }();
    return v;
}

namespace detail {

// sigma_k and tau_k written out in the magic-type basis (1-based entries
// (r, c) in the comments map onto 0-based indices).
inline const std::array<CMat4, 3>& magic_sigma() {
    static const std::array<CMat4, 3> ops = [] {
        const cplx i{0.0, 1.0};
        std::array<CMat4, 3> m;
        for (auto& x : m) x.setZero();
        m[0](0, 1) = -i; m[0](1, 0) = i;  m[0](2, 3) = i;  m[0](3, 2) = -i;
        m[1](0, 2) = i;  m[1](2, 0) = -i; m[1](1, 3) = i;  m[1](3, 1) = -i;
        m[2](0, 3) = -i; m[2](3, 0) = i;  m[2](1, 2) = i;  m[2](2, 1) = -i;
        return m;
    }();
    return ops;
}

inline const std::array<CMat4, 3>& magic_tau() {
    static const std::array<CMat4, 3> ops = [] {
        const cplx i{0.0, 1.0};
        std::array<CMat4, 3> m;
        for (auto& x : m) x.setZero();
        m[0](0, 1) = -i; m[0](1, 0) = i;  m[0](2, 3) = -i; m[0](3, 2) = i;
        m[1](0, 2) = i;  m[1](2, 0) = -i; m[1](1, 3) = -i; m[1](3, 1) = i;
        m[2](0, 3) = i;  m[2](3, 0) = -i; m[2](1, 2) = i;  m[2](2, 1) = -i;
        return m;
    }();
    return ops;
}

} // namespace detail

/// sigma.s + t.tau + sigma.C.tau in the magic-type basis; unitarily
/// equivalent to pauli_part(p), i.e. spectrum equal to that of -K.
inline CMat4 magic_basis_matrix(const PauliRep& p) {
    const auto& sg = detail::magic_sigma();
    const auto& tu = detail::magic_tau();
    CMat4 m = CMat4::Zero();
    // s, t part entry by entry so that e.g. entry (1,2) is exactly -i (s1 + t1)
    for (int a = 0; a < 3; ++a) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                const cplx ss = sg[a](r, c), tt = tu[a](r, c);
                if (ss == cplx{} && tt == cplx{})
                    continue;
                // both are +/- i at the same position
                const double coeff = ss.imag() * p.s(a) + tt.imag() * p.t(a);
                m(r, c) = cplx{0.0, coeff};
            }
        }
    }
    // products sigma_j tau_k are real symmetric; accumulate in j, k order
    CMat4 prod = CMat4::Zero();
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            prod += p.c(j, k) * (sg[j] * tu[k]);
    return m + prod;
}

// ---------------------------------------------------------------------------
// randomness

/// splitmix64 finaliser; used to derive independent per-sample seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix_seed(mix_seed(master) ^ (index + 0x632be59bd9b4e019ULL));
}

/// Haar-random proper rotation from a Gaussian QR.
template <class Rng>
Mat3 random_rotation(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat3 g;
    for (int i = 0; i < 9; ++i)
        g(i) = gauss(rng);
    Eigen::HouseholderQR<Mat3> qr(g);
    Mat3 q = qr.householderQ();
    const Mat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 3; ++k)
        if (r(k, k) < 0.0)
            q.col(k) *= -1.0;
    if (q.determinant() < 0.0)
        q.col(2) *= -1.0;
    return q;
}

template <class Rng>
LocalRotation random_local_rotation(Rng& rng) {
    const Mat3 a = random_rotation(rng);
    const Mat3 b = random_rotation(rng);
    return LocalRotation(a, b);
}

struct RandomMeasure {
    enum class kind { hilbert_schmidt, rank_constrained, pauli_rejection };
    kind type = kind::hilbert_schmidt;
    int rank = 4; // used by rank_constrained only

    static RandomMeasure hilbert_schmidt() { return {}; }
    static RandomMeasure rank_constrained(int k) { return {kind::rank_constrained, k}; }
    static RandomMeasure pauli_rejection() { return {kind::pauli_rejection, 4}; }
};

namespace detail {

template <class Rng>
CMat4 gaussian_state(Rng& rng, int rank) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> g(4, rank);
    for (int c = 0; c < rank; ++c)
        for (int r = 0; r < 4; ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(r, c) = cplx{re, im};
        }
    CMat4 m = g * g.adjoint();
    m /= m.trace().real();
    return 0.5 * (m + m.adjoint());
}

} // namespace detail

/// Deterministic for fixed (seed, measure) on a given standard library.
inline PauliRep random_state(std::uint64_t seed, RandomMeasure measure = {}) {
    std::mt19937_64 rng(seed);
    switch (measure.type) {
    case RandomMeasure::kind::hilbert_schmidt:
        return from_operator(detail::gaussian_state(rng, 4));
    case RandomMeasure::kind::rank_constrained:
        if (measure.rank < 1 || measure.rank > 4)
            throw domain_error("rank-constrained sampling needs 1 <= k <= 4");
        return from_operator(detail::gaussian_state(rng, measure.rank));
    case RandomMeasure::kind::pauli_rejection: {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (long attempt = 0; attempt < 1'000'000'000L; ++attempt) {
            PauliRep p;
            for (int i = 0; i < 3; ++i) p.s(i) = u(rng);
            for (int i = 0; i < 3; ++i) p.t(i) = u(rng);
            for (int i = 0; i < 9; ++i) p.c(i / 3, i % 3) = u(rng);
            // necessary conditions first: A2 <= 6 and Bloch lengths <= 1
            if (p.s.squaredNorm() + p.t.squaredNorm() + p.c.squaredNorm() > 3.0)
                continue;
            if (p.s.squaredNorm() > 1.0 || p.t.squaredNorm() > 1.0)
                continue;
            if (min_eigenvalue(to_operator(p)) >= 0.0)
                return p;
        }
        throw diagnostics_error("pauli-rejection sampling exhausted its attempt budget");
    }
    }
    throw domain_error("unknown random measure");
}

} // namespace pauliscope
