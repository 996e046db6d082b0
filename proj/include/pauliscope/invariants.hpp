// invariants.hpp: global invariants of K = 1 - 4P, local polynomial
// invariants, the entanglement dyadic and the quartic-root machinery

#pragma once

#include "statecore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pauliscope {

/// Coefficients of the characteristic quartic k^4 - A2 k^2 + A1 k - A0 = 0 of K.
struct GlobalInvariants {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
};

/// Invariants of an arbitrary traceless Hermitian 4x4 matrix.
inline GlobalInvariants global_invariants(const CMat4& k) {
    const CMat4 k2 = k * k;
    const double tr2 = k2.trace().real();
    const double tr3 = (k2 * k).trace().real();
    const double tr4 = (k2 * k2).trace().real();
    return {0.5 * tr2, -tr3 / 3.0, 0.25 * tr4 - 0.125 * tr2 * tr2};
}

/// Trace route; authoritative.
inline GlobalInvariants global_invariants(const PauliRep& p) { return global_invariants(k_operator(p)); }

/// E = C - s t^T; vanishes exactly for product states.
inline Mat3 entanglement_dyadic(const PauliRep& p) { return p.c - p.s * p.t.transpose(); }

/// The nine local polynomial invariants of degree <= 4.
struct LocalInvariants {
    double tr_ctc = 0.0;
    double det_c = 0.0;
    double tr_ctc_sq = 0.0;
    double s_sq = 0.0;
    double t_sq = 0.0;
    double s_c_t = 0.0;
    double s_cct_s = 0.0;
    double t_ctc_t = 0.0;
    double det_e = 0.0;

    std::array<double, 9> as_array() const {
        return {tr_ctc, det_c, tr_ctc_sq, s_sq, t_sq, s_c_t, s_cct_s, t_ctc_t, det_e};
    }
};

inline LocalInvariants local_invariants(const PauliRep& p) {
    const Mat3 ctc = p.c.transpose() * p.c;
    LocalInvariants li;
    li.tr_ctc = ctc.trace();
    li.det_c = p.c.determinant();
    li.tr_ctc_sq = (ctc * ctc).trace();
    li.s_sq = p.s.squaredNorm();
    li.t_sq = p.t.squaredNorm();
    li.s_c_t = p.s.dot(p.c * p.t);
    li.s_cct_s = p.s.dot(p.c * p.c.transpose() * p.s);
    li.t_ctc_t = p.t.dot(ctc * p.t);
    li.det_e = entanglement_dyadic(p).determinant();
    return li;
}

/// Closed-form A2, A1, A0 from the local invariants. Diagnostics only; the
/// coefficients were fitted against the trace route:
///   A2 = 2 Tr(CtC) + 2 (s^2 + t^2)
///   A1 = -8 det C + 8 s.C.t
///   A0 = -(A2/2)^2 + 2 [Tr CtC]^2 - 2 Tr[(CtC)^2] + 4 s^2 t^2
///        + 4 s.CCt.s + 4 t.CtC.t + 8 det E - 8 det C
inline GlobalInvariants closed_form_invariants(const LocalInvariants& li) {
    GlobalInvariants g;
    g.a2 = 2.0 * li.tr_ctc + 2.0 * (li.s_sq + li.t_sq);
    g.a1 = -8.0 * li.det_c + 8.0 * li.s_c_t;
    const double h = 0.5 * g.a2;
    g.a0 = -h * h + 2.0 * li.tr_ctc * li.tr_ctc - 2.0 * li.tr_ctc_sq + 4.0 * li.s_sq * li.t_sq +
           4.0 * li.s_cct_s + 4.0 * li.t_ctc_t + 8.0 * li.det_e - 8.0 * li.det_c;
    return g;
}

inline GlobalInvariants closed_form_invariants(const PauliRep& p) {
    return closed_form_invariants(local_invariants(p));
}

// ---------------------------------------------------------------------------
// quartic roots

using QuarticRoots = std::array<double, 4>;

namespace detail {

inline double poly_scale(const GlobalInvariants& g) {
    // Cauchy-type bound on |root|, keeps tolerances relative
    return std::max({1.0, std::abs(g.a2), std::abs(g.a1), std::abs(g.a0)});
}

} // namespace detail

/// Real roots of k^4 - A2 k^2 + A1 k - A0, ascending.
///
/// Roots come from the companion-matrix eigenvalues. A root is real when its
/// imaginary part is below 1e-8 relative to the largest root magnitude.
/// A multiple root of multiplicity m is only resolved to ~eps^(1/m), so a
/// root off the axis is still accepted when it belongs to a cluster of m >= 2
/// roots whose centroid is real and whose spread is within that bound; it is
/// then replaced by the centroid.
inline QuarticRoots quartic_roots(const GlobalInvariants& g) {
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    // monic x^4 + 0 x^3 - A2 x^2 + A1 x - A0
    const double coeff[4] = {-g.a0, g.a1, -g.a2, 0.0};
    for (int i = 1; i < 4; ++i)
        comp(i, i - 1) = 1.0;
    for (int i = 0; i < 4; ++i)
        comp(i, 3) = -coeff[i];
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
    std::array<cplx, 4> z;
    for (int i = 0; i < 4; ++i)
        z[static_cast<std::size_t>(i)] = es.eigenvalues()(i);

    double rmax = 1.0;
    for (const auto& v : z)
        rmax = std::max(rmax, std::abs(v));
    const double eps = std::numeric_limits<double>::epsilon() * detail::poly_scale(g);
    const double im_tol = 1e-8 * rmax;

    QuarticRoots out{};
    for (int i = 0; i < 4; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (std::abs(z[ui].imag()) <= im_tol) {
            out[ui] = z[ui].real();
            continue;
        }
        // a root off the real axis: only acceptable as a member of a perturbed
        // multiple real root
        cplx centroid{};
        int m = 0;
        const double join = 64.0 * std::cbrt(eps) * rmax;
        for (const auto& w : z)
            if (std::abs(w - z[ui]) <= join) {
                centroid += w;
                ++m;
            }
        centroid /= static_cast<double>(m);
        const double allow = 64.0 * std::pow(eps, 1.0 / m) * rmax;
        if (m < 2 || std::abs(centroid.imag()) > im_tol || std::abs(z[ui] - centroid) > allow)
            throw no_real_roots("quartic has a complex root pair (imaginary part " +
                                std::to_string(std::abs(z[ui].imag())) + ")");
        out[ui] = centroid.real();
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// positivity inequalities

using Margins = std::array<double, 3>;

/// (1 - A2 + A1 - A0, 4 - 2 A2 + A1, 6 - A2). All three non-negative iff every
/// real root of the quartic is <= 1 (given that the roots are real). The first
/// margin equals (1 - k1)(1 - k2)(1 - k3)(1 - k4).
inline Margins positivity_inequalities(const GlobalInvariants& g) {
    return {1.0 - g.a2 + g.a1 - g.a0, 4.0 - 2.0 * g.a2 + g.a1, 6.0 - g.a2};
}

// ---------------------------------------------------------------------------
// lambda parameterisation of the roots

struct LambdaTriple {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
};

/// l_j = (k_j + k_4) / 2 for j = 1, 2, 3, in the order given.
inline LambdaTriple lambda_parameterization(const QuarticRoots& k, double tol = default_tol) {
    const double sum = k[0] + k[1] + k[2] + k[3];
    const double scale = std::max({1.0, std::abs(k[0]), std::abs(k[1]), std::abs(k[2]), std::abs(k[3])});
    if (std::abs(sum) > tol * scale)
        throw domain_error("roots do not sum to zero (sum " + std::to_string(sum) + ")");
    return {0.5 * (k[0] + k[3]), 0.5 * (k[1] + k[3]), 0.5 * (k[2] + k[3])};
}

/// k1,2 = +/-(l1 - l2) - l3 and k3,4 = -/+(l1 + l2) + l3.
inline QuarticRoots reconstruct_roots(const LambdaTriple& l) {
    return {(l.l1 - l.l2) - l.l3, -(l.l1 - l.l2) - l.l3, -(l.l1 + l.l2) + l.l3, (l.l1 + l.l2) + l.l3};
}

/// A2, A1, A0 written in the lambda parameters.
inline GlobalInvariants invariants_from_lambda(const LambdaTriple& l) {
    const double x = l.l1 * l.l1, y = l.l2 * l.l2, z = l.l3 * l.l3;
    return {2.0 * (x + y + z), -8.0 * l.l1 * l.l2 * l.l3, 2.0 * (x * y + y * z + z * x) - (x * x + y * y + z * z)};
}

} // namespace pauliscope
