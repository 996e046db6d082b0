// classify.hpp: characteristic values of C, the six classes of families and
// the canonical (generic-form) parameters of a state

#pragma once

#include "criteria.hpp"
#include "invariants.hpp"
#include "statecore.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace pauliscope {

enum class Sign { plus, minus };
enum class FamilyClass { A, B, C, D, E, F };

inline char class_letter(FamilyClass c) { return "ABCDEF"[static_cast<int>(c)]; }
inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }
inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct ClassLabel {
    FamilyClass label = FamilyClass::A;
    Sign sign = Sign::plus;

    bool operator==(const ClassLabel&) const = default;
    std::string str() const { return std::string{class_letter(label), sign_char(sign)}; }
};

/// C = sign * E diag(c) N^T, E and N proper rotations (columns e_k, n_k).
struct CharacteristicDecomposition {
    Sign sign = Sign::plus;
    Vec3 c = Vec3::Zero(); // descending, non-negative
    Mat3 e_frame = Mat3::Identity();
    Mat3 n_frame = Mat3::Identity();

    Mat3 reconstruct() const { return sign_value(sign) * e_frame * c.asDiagonal() * n_frame.transpose(); }
};

namespace detail {

inline double degeneracy_tol(const Vec3& c, double tol) { return tol * std::max(1.0, c(0)); }

/// Orthonormal basis of span(cols), taken from the projections of the world
/// axes x, y, z in that order.
inline Eigen::MatrixXd world_basis_in(const Eigen::MatrixXd& cols) {
    const Eigen::Index m = cols.cols();
    Eigen::MatrixXd out(3, m);
    Eigen::Index got = 0;
    for (int axis = 0; axis < 3 && got < m; ++axis) {
        Vec3 v = cols * (cols.transpose() * Vec3::Unit(axis));
        for (Eigen::Index j = 0; j < got; ++j)
            v -= out.col(j).dot(v) * out.col(j);
        if (v.norm() > 1e-6)
            out.col(got++) = v.normalized();
    }
    return out;
}

/// Proper rotation whose first column is along `a` (non-zero). The second
/// column is the first world axis with a usable component orthogonal to `a`.
inline Mat3 frame_from(const Vec3& a) {
    Mat3 q;
    q.col(0) = a.normalized();
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 v = Vec3::Unit(axis) - q.col(0).dot(Vec3::Unit(axis)) * q.col(0);
        if (v.norm() > 0.5) {
            q.col(1) = v.normalized();
            break;
        }
    }
    q.col(2) = q.col(0).cross(q.col(1));
    return q;
}

/// Proper rotation fixing axis `k` (up to the sign `eps` on that axis) whose
/// column (k+2)%3 points along the in-plane vector `v` (component k ignored).
inline Mat3 plane_rotation(int k, const Vec3& v, double eps = 1.0) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    Vec3 qk = eps * Vec3::Unit(k);
    Vec3 qj = Vec3::Zero();
    qj(i) = v(i);
    qj(j) = v(j);
    qj.normalize();
    Mat3 q;
    q.col(k) = qk;
    q.col(j) = qj;
    q.col(i) = qj.cross(qk);
    return q;
}

} // namespace detail

/// SVD of sign*C with the overall sign taken from det C. Degenerate blocks of
/// singular values get frames spanned by projected world axes; a zero block
/// is fixed on each side independently. Properness is restored by flipping
/// paired third columns (or one of them when c3 vanishes).
inline CharacteristicDecomposition characteristic_decomposition(const CrossDyadic& c, double tol = default_tol) {
    if (!c.allFinite())
        throw invalid_input("cross dyadic has non-finite entries");
    CharacteristicDecomposition d;
    d.sign = c.determinant() < 0.0 ? Sign::minus : Sign::plus;
    const Mat3 m = sign_value(d.sign) * c;
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    d.c = svd.singularValues();
    Mat3 u = svd.matrixU();
    Mat3 v = svd.matrixV();
    const double dtol = detail::degeneracy_tol(d.c, tol);

    int start = 0;
    while (start < 3) {
        int end = start + 1;
        while (end < 3 && d.c(end - 1) - d.c(end) <= dtol)
            ++end;
        const int size = end - start;
        if (d.c(start) <= dtol) {
            u.middleCols(start, size) = detail::world_basis_in(u.middleCols(start, size));
            v.middleCols(start, size) = detail::world_basis_in(v.middleCols(start, size));
        } else if (size > 1) {
            const Eigen::MatrixXd b = detail::world_basis_in(u.middleCols(start, size));
            const Eigen::MatrixXd q = u.middleCols(start, size).transpose() * b;
            u.middleCols(start, size) = b;
            v.middleCols(start, size) = v.middleCols(start, size) * q;
        } else {
            Eigen::Index big = 0;
            u.col(start).cwiseAbs().maxCoeff(&big);
            if (u(big, start) < 0.0) {
                u.col(start) *= -1.0;
                v.col(start) *= -1.0;
            }
        }
        start = end;
    }

    const bool bad_u = u.determinant() < 0.0, bad_v = v.determinant() < 0.0;
    if (bad_u && bad_v) {
        u.col(2) *= -1.0;
        v.col(2) *= -1.0;
    } else if (bad_u) {
        u.col(2) *= -1.0;
    } else if (bad_v) {
        v.col(2) *= -1.0;
    }
    d.e_frame = u;
    d.n_frame = v;
    return d;
}

/// Auxiliary quantities a, b of the characteristic values; a^2 <= b^3 always,
/// with b^3 - a^2 = (27/4) prod_{i<j} (c_i^2 - c_j^2)^2.
inline std::pair<double, double> auxiliary_ab(const CrossDyadic& c) {
    const Mat3 ctc = c.transpose() * c;
    const double t1 = ctc.trace();
    const double t2 = (ctc * ctc).trace();
    const double det = c.determinant();
    const double a = 2.25 * t1 * t2 - 1.25 * t1 * t1 * t1 + 13.5 * det * det;
    const double b = 1.5 * t2 - 0.5 * t1 * t1;
    return {a, b};
}

inline std::pair<double, double> auxiliary_ab(const PauliRep& p) { return auxiliary_ab(p.c); }

/// The decision table in a, b and det C. Equalities are relative to the
/// natural scale of each quantity, built from Tr(C^T C). The gap is quadratic
/// in the c differences, so near-degeneracies below about sqrt(tol) relative
/// already count as equal here; class_of is the sharper route.
inline ClassLabel class_from_ab(double a, double b, double det_c, double tr_ctc, double tol = default_tol) {
    const double s = std::max(tr_ctc, 0.0);
    const Sign sgn = det_c < 0.0 ? Sign::minus : Sign::plus;
    // purely relative: b scales as s^2, the gap as s^6, det C as s^1.5
    const bool det_zero = std::abs(det_c) <= tol * std::pow(s, 1.5);
    const double gap = b * b * b - a * a;
    const bool a2_eq_b3 = gap <= tol * s * s * s * s * s * s;
    const bool zero = std::abs(b) <= tol * s * s;
    if (!a2_eq_b3)
        return {FamilyClass::F, sgn};
    if (zero)
        return det_zero ? ClassLabel{FamilyClass::A, Sign::plus} : ClassLabel{FamilyClass::B, sgn};
    if (a < 0.0)
        return {FamilyClass::E, sgn};
    return det_zero ? ClassLabel{FamilyClass::C, Sign::plus} : ClassLabel{FamilyClass::D, sgn};
}

/// Label from the characteristic values: the same table written as
/// degeneracy patterns of c1 >= c2 >= c3 (A: all zero, B: all equal and
/// non-zero, C: c2 = c3 = 0, D: c2 = c3 != 0, E: c1 = c2 > c3, F: distinct).
inline ClassLabel class_of(const CharacteristicDecomposition& d, double tol = default_tol) {
    const Vec3& c = d.c;
    const double dtol = detail::degeneracy_tol(c, tol);
    const Sign sgn = (d.sign == Sign::minus && c(2) > dtol) ? Sign::minus : Sign::plus;
    if (c(0) <= dtol)
        return {FamilyClass::A, Sign::plus};
    if (c(0) - c(2) <= dtol)
        return {FamilyClass::B, sgn};
    if (c(1) <= dtol)
        return {FamilyClass::C, Sign::plus};
    if (c(1) - c(2) <= dtol)
        return {FamilyClass::D, sgn};
    if (c(0) - c(1) <= dtol)
        return {FamilyClass::E, sgn};
    return {FamilyClass::F, sgn};
}

inline ClassLabel class_of(const PauliRep& p, double tol = default_tol) {
    return class_of(characteristic_decomposition(p.c, tol), tol);
}

/// The nine numbers of a family in its generic form, plus the class label.
struct FamilyDescriptor {
    ClassLabel cls;
    Vec3 c = Vec3::Zero();
    Vec3 s = Vec3::Zero();
    Vec3 t = Vec3::Zero();

    /// Largest entrywise difference; infinite when the labels differ.
    double distance(const FamilyDescriptor& o) const {
        if (!(cls == o.cls))
            return std::numeric_limits<double>::infinity();
        return std::max({(c - o.c).cwiseAbs().maxCoeff(), (s - o.s).cwiseAbs().maxCoeff(),
                         (t - o.t).cwiseAbs().maxCoeff()});
    }
};

/// Descriptor plus the frames it is read off in: s = E^T s_world,
/// t = N^T t_world, sign*diag(c) = E^T C N.
struct CanonicalForm {
    FamilyDescriptor descriptor;
    Mat3 e_frame = Mat3::Identity();
    Mat3 n_frame = Mat3::Identity();
};

namespace detail {

inline bool negative(double x, double tol) { return x < -tol; }
inline bool vanishes(double x, double tol) { return std::abs(x) <= tol; }

// Residual frame rotations (applied on the right of E and N) per class.

inline Mat3 residual_b(const Vec3& s, const Vec3& t, double tol) {
    if (s.norm() > tol) {
        const Vec3 q1 = s.normalized();
        const Vec3 tp = t - q1.dot(t) * q1;
        if (tp.norm() <= tol)
            return frame_from(q1);
        Mat3 q;
        q.col(0) = q1;
        q.col(2) = tp.normalized();
        q.col(1) = q.col(2).cross(q.col(0));
        return q;
    }
    if (t.norm() > tol)
        return frame_from(t);
    return Mat3::Identity();
}

inline Mat3 residual_d(const Vec3& s, const Vec3& t, double tol) {
    Mat3 q = Mat3::Identity();
    const Vec3 sp(0.0, s(1), s(2)), tp(0.0, t(1), t(2));
    if (sp.norm() > tol)
        q = plane_rotation(0, sp);
    else if (tp.norm() > tol)
        q = plane_rotation(0, tp);
    const Vec3 s2 = q.transpose() * s, t2 = q.transpose() * t;
    const bool flip = negative(s2(0), tol) ||
                      (vanishes(s2(0), tol) && (negative(t2(0), tol) || (vanishes(t2(0), tol) && negative(t2(1), tol))));
    if (flip)
        q = q * Vec3(-1.0, -1.0, 1.0).asDiagonal();
    return q;
}

inline Mat3 residual_e(const Vec3& s, const Vec3& t, double tol) {
    Mat3 q = Mat3::Identity();
    const Vec3 sp(s(0), s(1), 0.0), tp(t(0), t(1), 0.0);
    // plane_rotation(2, v) puts v along column 1 (the y axis); we want x
    auto along_x = [](const Vec3& v) {
        Mat3 r;
        r.col(0) = v.normalized();
        r.col(2) = Vec3::UnitZ();
        r.col(1) = r.col(2).cross(r.col(0));
        return r;
    };
    if (sp.norm() > tol)
        q = along_x(sp);
    else if (tp.norm() > tol)
        q = along_x(tp);
    const Vec3 s2 = q.transpose() * s, t2 = q.transpose() * t;
    const bool flip = negative(s2(2), tol) ||
                      (vanishes(s2(2), tol) && (negative(t2(2), tol) || (vanishes(t2(2), tol) && negative(t2(1), tol))));
    if (flip)
        q = q * Vec3(1.0, -1.0, -1.0).asDiagonal();
    return q;
}

inline Mat3 residual_f(const Vec3& s, const Vec3& t, double tol) {
    static const std::array<Vec3, 4> flips = {Vec3(1, 1, 1), Vec3(-1, -1, 1), Vec3(-1, 1, -1), Vec3(1, -1, -1)};
    int best = 0;
    std::array<bool, 6> best_key{};
    for (int f = 0; f < 4; ++f) {
        const Vec3& g = flips[static_cast<std::size_t>(f)];
        const std::array<double, 6> v = {g(0) * s(0), g(0) * t(0), g(1) * s(1), g(1) * t(1), g(2) * s(2), g(2) * t(2)};
        std::array<bool, 6> key{};
        for (std::size_t i = 0; i < 6; ++i)
            key[i] = v[i] >= -tol;
        if (f == 0 || key > best_key) {
            best = f;
            best_key = key;
        }
    }
    return flips[static_cast<std::size_t>(best)].asDiagonal();
}

inline void zero_small(Vec3& v, double tol) {
    for (int i = 0; i < 3; ++i)
        if (std::abs(v(i)) <= tol)
            v(i) = 0.0;
}

} // namespace detail

/// Generic form of the family of p. Requires a positive state.
inline CanonicalForm canonicalize(const PauliRep& p, double tol = default_tol) {
    if (!p.all_finite())
        throw invalid_input("state has non-finite entries");
    if (!is_positive(p, tol).satisfied)
        throw invalid_state("canonicalize needs a positive state");

    const CharacteristicDecomposition d = characteristic_decomposition(p.c, tol);
    const ClassLabel label = class_of(d, tol);
    Mat3 u = d.e_frame, v = d.n_frame;
    if (label.sign == Sign::plus && d.sign == Sign::minus) {
        // det C < 0 only through a vanishing c3: absorb the sign in e1, e2
        u.col(0) *= -1.0;
        u.col(1) *= -1.0;
    }
    const Vec3 s = u.transpose() * p.s;
    const Vec3 t = v.transpose() * p.t;

    Mat3 qe = Mat3::Identity(), qn = Mat3::Identity();
    switch (label.label) {
    case FamilyClass::A:
        u = p.s.norm() > tol ? detail::frame_from(p.s) : Mat3::Identity();
        v = p.t.norm() > tol ? detail::frame_from(p.t) : Mat3::Identity();
        break;
    case FamilyClass::B:
        qe = qn = detail::residual_b(s, t, tol);
        break;
    case FamilyClass::C: {
        const bool flip = detail::negative(s(0), tol) || (detail::vanishes(s(0), tol) && detail::negative(t(0), tol));
        const double eps = flip ? -1.0 : 1.0;
        const Vec3 sp(0.0, s(1), s(2)), tp(0.0, t(1), t(2));
        // column 2 of the rotation carries the in-plane vector
        qe = sp.norm() > tol ? detail::plane_rotation(0, sp, eps) : Mat3(Vec3(eps, 1.0, eps).asDiagonal());
        qn = tp.norm() > tol ? detail::plane_rotation(0, tp, eps) : Mat3(Vec3(eps, 1.0, eps).asDiagonal());
        break;
    }
    case FamilyClass::D:
        qe = qn = detail::residual_d(s, t, tol);
        break;
    case FamilyClass::E:
        qe = qn = detail::residual_e(s, t, tol);
        break;
    case FamilyClass::F:
        qe = qn = detail::residual_f(s, t, tol);
        break;
    }

    CanonicalForm out;
    out.e_frame = u * qe;
    out.n_frame = v * qn;
    out.descriptor.cls = label;
    out.descriptor.c = d.c;
    const double dtol = detail::degeneracy_tol(d.c, tol);
    for (int k = 0; k < 3; ++k)
        if (out.descriptor.c(k) <= dtol)
            out.descriptor.c(k) = 0.0;
    out.descriptor.s = out.e_frame.transpose() * p.s;
    out.descriptor.t = out.n_frame.transpose() * p.t;
    detail::zero_small(out.descriptor.s, tol);
    detail::zero_small(out.descriptor.t, tol);
    return out;
}

/// The representative of a family in identity frames.
inline PauliRep descriptor_state(const FamilyDescriptor& f) {
    PauliRep p;
    p.s = f.s;
    p.t = f.t;
    p.c = sign_value(f.cls.sign) * Mat3(f.c.asDiagonal());
    return p;
}

inline bool same_family(const PauliRep& p, const PauliRep& q, double tol = default_tol) {
    return canonicalize(p, tol).descriptor.distance(canonicalize(q, tol).descriptor) <= tol;
}

} // namespace pauliscope
