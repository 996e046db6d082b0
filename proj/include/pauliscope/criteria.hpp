// criteria.hpp: positivity and separability through the invariant
// inequalities, cross-checked against direct eigensolves

#pragma once

#include "invariants.hpp"
#include "statecore.hpp"

#include <cmath>
#include <string>

namespace pauliscope {

/// (s, t, C) -> (-s, t, -C). Unitarily equivalent to the partial transpose.
inline PauliRep ph3_transform(const PauliRep& p) { return {-p.s, p.t, -p.c}; }

/// (s, t, C) -> (-s, -t, C), the spin-flipped state. Same spectrum as p.
inline PauliRep hw_transform(const PauliRep& p) { return {-p.s, -p.t, p.c}; }

/// Transpose on the sigma (first) factor, in the computational basis.
inline CMat4 partial_transpose(const CMat4& m) {
    CMat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(2 * i + j, 2 * k + l) = m(2 * k + j, 2 * i + l);
    return out;
}

struct CriterionReport {
    bool satisfied = false;
    Margins margins{};
    double min_eigenvalue = 0.0;
    int negative_count = 0;
};

/// Disagreements between the margin and eigenvalue routes are only reported
/// when the eigenvalue is this far from zero. The margins are polynomials in
/// the eigenvalues, so near a boundary of a low-rank state an O(tol) margin
/// can sit next to a much larger eigenvalue.
inline constexpr double diagnostics_band = 1e-6;

namespace detail {

inline CriterionReport make_report(const Margins& m, const Vec4& eig, double tol, const char* what) {
    CriterionReport r;
    r.margins = m;
    r.satisfied = m[0] >= -tol && m[1] >= -tol && m[2] >= -tol;
    r.min_eigenvalue = eig(0);
    for (int i = 0; i < 4; ++i)
        if (eig(i) < -tol)
            ++r.negative_count;
    const bool eig_ok = eig(0) >= -tol;
    if (eig_ok != r.satisfied && std::abs(eig(0)) > diagnostics_band)
        throw diagnostics_error(std::string(what) + ": inequality margins and eigenvalues disagree (min eigenvalue " +
                                std::to_string(eig(0)) + ")");
    return r;
}

} // namespace detail

inline CriterionReport is_positive(const PauliRep& p, double tol = default_tol) {
    if (!p.all_finite())
        throw invalid_input("state has non-finite entries");
    const Margins m = positivity_inequalities(global_invariants(p));
    return detail::make_report(m, spectrum(to_operator(p)), tol, "positivity");
}

/// Margins of the separability inequalities; A-invariants of p by the trace route.
inline Margins separability_inequalities(const PauliRep& p) {
    const GlobalInvariants g = global_invariants(p);
    const double det_c = p.c.determinant();
    const double det_e = entanglement_dyadic(p).determinant();
    return {1.0 + 16.0 * det_e - (g.a2 - g.a1 + g.a0), 4.0 + 16.0 * det_c - (2.0 * g.a2 - g.a1), 6.0 - g.a2};
}

inline CriterionReport is_separable(const PauliRep& p, double tol = default_tol) {
    if (!is_positive(p, tol).satisfied)
        throw invalid_state("separability is only defined for positive states");
    return detail::make_report(separability_inequalities(p), spectrum(to_operator(ph3_transform(p))), tol,
                               "separability");
}

struct RankProfile {
    int rank = 0;
    int negative_count = 0;
};

inline RankProfile ph3_rank_profile(const PauliRep& p, double tol = default_tol) {
    if (!is_positive(p, tol).satisfied)
        throw invalid_state("rank profile needs a positive state");
    const Vec4 eig = spectrum(to_operator(ph3_transform(p)));
    RankProfile r;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(eig(i)) > tol)
            ++r.rank;
        if (eig(i) < -tol)
            ++r.negative_count;
    }
    return r;
}

} // namespace pauliscope
