// entangle.hpp: concurrence, Lewenstein-Sanpera decompositions and the
// S + C bound

#pragma once

#include "classify.hpp"
#include "criteria.hpp"
#include "detail/nelder_mead.hpp"
#include "statecore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace pauliscope {

// ---------------------------------------------------------------------------
// concurrence

struct ConcurrenceResult {
    double value = 0.0;
    std::array<double, 4> r_values{}; // ascending
};

namespace detail {

/// F with F F^dagger = m, eigenvalues below `floor` dropped.
inline CMat4 psd_factor(const CMat4& m, double floor) {
    Eigen::SelfAdjointEigenSolver<CMat4> es(0.5 * (m + m.adjoint()));
    CMat4 f = CMat4::Zero();
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()(i) > floor)
            f.col(i) = es.eigenvectors().col(i) * std::sqrt(es.eigenvalues()(i));
    return f;
}

} // namespace detail

/// The r_k are the singular values of F^dagger G with P = F F^dagger and
/// Pbar = G G^dagger; their squares are the eigenvalues of P Pbar. Working
/// with the factors avoids the square root of near-zero product eigenvalues.
inline ConcurrenceResult concurrence(const PauliRep& p, double tol = default_tol) {
    if (!is_positive(p, tol).satisfied)
        throw invalid_state("concurrence needs a positive state");
    constexpr double floor = 1e-14;
    const CMat4 f = detail::psd_factor(to_operator(p), floor);
    const CMat4 g = detail::psd_factor(to_operator(hw_transform(p)), floor);
    Eigen::JacobiSVD<CMat4> svd(f.adjoint() * g);
    ConcurrenceResult r;
    for (int i = 0; i < 4; ++i)
        r.r_values[static_cast<std::size_t>(i)] = svd.singularValues()(i);
    std::sort(r.r_values.begin(), r.r_values.end());
    const double sum = r.r_values[0] + r.r_values[1] + r.r_values[2] + r.r_values[3];
    r.value = std::max(0.0, 2.0 * r.r_values[3] - sum);
    return r;
}

// ---------------------------------------------------------------------------
// LSD: single pure part

namespace detail {

inline double min_eig(const CMat4& m) {
    Eigen::SelfAdjointEigenSolver<CMat4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// min over the spectra of m and of its partial transpose
inline double separable_slack(const CMat4& m) { return std::min(min_eig(m), min_eig(partial_transpose(m))); }

inline void check_pure(const DensityMatrix& pure, double tol) {
    if (const double d = purity_defect(pure.matrix()); d > tol)
        throw domain_error("pure part is not a rank-1 projector (purity defect " + std::to_string(d) + ")");
}

} // namespace detail

/// Largest lambda with (P - (1 - lambda) pure) / lambda positive and PPT,
/// found by a geometric grid in mu = 1/lambda on [1, mu_cap] and bisection.
inline double lsd_lambda_max(const PauliRep& p, const DensityMatrix& pure, double tol = default_tol,
                             double inner_tol = 1e-8, double mu_cap = 1e3, int grid = 2001) {
    if (!is_positive(p, tol).satisfied)
        throw invalid_state("lsd_lambda_max needs a positive state");
    detail::check_pure(pure, tol);
    const CMat4 m = to_operator(p);
    const CMat4& pi = pure.matrix();
    auto feasible = [&](double mu) { return detail::separable_slack(mu * m - (mu - 1.0) * pi) >= -tol; };

    if (feasible(1.0))
        return 1.0;
    auto bisect = [&](double lo, double hi) { // lo infeasible, hi feasible
        while (1.0 / lo - 1.0 / hi > inner_tol) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? hi : lo) = mid;
        }
        return 1.0 / hi;
    };
    double prev = 1.0;
    for (int k = 1; k < grid; ++k) {
        const double mu = std::pow(mu_cap, static_cast<double>(k) / (grid - 1));
        if (feasible(mu))
            return bisect(prev, mu);
        prev = mu;
    }
    // The feasible interval can be a single point (rank-two P, for one).
    // The slack is concave in mu, so a ternary search finds its maximum.
    double lo = 1.0, hi = mu_cap;
    auto slack = [&](double mu) { return detail::separable_slack(mu * m - (mu - 1.0) * pi); };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (slack(a) < slack(b))
            lo = a;
        else
            hi = b;
    }
    const double top = 0.5 * (lo + hi);
    if (feasible(top))
        return bisect(1.0, top);
    // no separable remainder for any lambda > 0
    return 0.0;
}

namespace detail {

struct EdgeResult {
    bool feasible = false;
    double w = 0.0;     // weight of the pure part when feasible
    double slack = 0.0; // best partial-transpose eigenvalue seen when not
};

/// Smallest w in [0, w_cap] with lambda_min(PT(P) - w PT(pi)) >= 0. The
/// function is concave in w, so Newton steps from w = 0 approach its first
/// root monotonically from below.
inline EdgeResult pure_weight_edge(const CMat4& pt_p, const CMat4& pt_pi, double w_cap) {
    constexpr double zero = 1e-14;
    double w = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::SelfAdjointEigenSolver<CMat4> es(pt_p - w * pt_pi);
        const double f = es.eigenvalues()(0);
        if (f >= -zero)
            return {true, w, f};
        const CVec4 v = es.eigenvectors().col(0);
        const double d = -v.dot(pt_pi * v).real();
        if (d <= 0.0)
            return {false, w, f};
        const double next = w - f / d;
        if (next >= w_cap) {
            const double fc = min_eig(pt_p - w_cap * pt_pi);
            if (fc >= -1e-12)
                return {true, w_cap, fc};
            return {false, w_cap, fc};
        }
        if (next - w <= 1e-15 * std::max(1.0, w))
            return {true, next, f};
        w = next;
    }
    return {true, w, 0.0};
}

/// Unit vectors in the support of P through a chart z_anchor = 1.
struct SupportChart {
    std::vector<CVec4> basis; // eigenvectors, eigenvalue descending
    std::vector<double> weights;

    int rank() const { return static_cast<int>(basis.size()); }

    /// coefficients in the support basis, normalised
    Eigen::VectorXcd coefficients(const Eigen::VectorXd& x, int anchor) const {
        const int r = rank();
        Eigen::VectorXcd z(r);
        int k = 0;
        for (int j = 0; j < r; ++j) {
            if (j == anchor) {
                z(j) = 1.0;
                continue;
            }
            z(j) = cplx{x(2 * k), x(2 * k + 1)};
            ++k;
        }
        return z / z.norm();
    }

    CVec4 vector(const Eigen::VectorXcd& z) const {
        CVec4 psi = CVec4::Zero();
        for (int j = 0; j < rank(); ++j)
            psi += z(j) * basis[static_cast<std::size_t>(j)];
        return psi;
    }

    /// largest w keeping P - w |psi><psi| positive
    double positivity_cap(const Eigen::VectorXcd& z) const {
        double s = 0.0;
        for (int j = 0; j < rank(); ++j)
            s += std::norm(z(j)) / weights[static_cast<std::size_t>(j)];
        return 1.0 / s;
    }
};

inline SupportChart support_chart(const CMat4& m, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<CMat4> es(m);
    SupportChart c;
    for (int i = 3; i >= 0; --i)
        if (es.eigenvalues()(i) > rank_tol) {
            c.basis.push_back(es.eigenvectors().col(i));
            c.weights.push_back(es.eigenvalues()(i));
        }
    return c;
}

/// Product state from the larger Schmidt term of psi; barely separable.
inline CMat4 schmidt_product(const CVec4& psi) {
    Eigen::Matrix2cd a;
    a << psi(0), psi(1), psi(2), psi(3);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector2cd u = svd.matrixU().col(0);
    const Eigen::Vector2cd v = svd.matrixV().col(0).conjugate();
    CVec4 prod;
    prod << u(0) * v(0), u(0) * v(1), u(1) * v(0), u(1) * v(1);
    return prod * prod.adjoint();
}

/// Product vectors in the span of e1, e2 (unit length). A two-dimensional
/// subspace holds one or two of them unless every vector in it is a product.
inline std::vector<CVec4> product_vectors(const CVec4& e1, const CVec4& e2) {
    auto det = [](const CVec4& a, const CVec4& b) { return a(0) * b(3) - a(1) * b(2); };
    // det(alpha A1 + beta A2) = alpha^2 d1 + alpha beta x + beta^2 d2
    const cplx d1 = det(e1, e1), d2 = det(e2, e2), x = det(e1, e2) + det(e2, e1);
    std::vector<CVec4> out;
    auto push = [&](const CVec4& v) { out.push_back(v / v.norm()); };
    auto quadratic = [](cplx a, cplx b, cplx c, cplx& r1, cplx& r2) {
        // a != 0; stable form
        cplx q = std::sqrt(b * b - 4.0 * a * c);
        if (std::real(std::conj(b) * q) < 0.0)
            q = -q;
        const cplx h = -0.5 * (b + q);
        r1 = h / a;
        r2 = h == cplx{} ? cplx{} : c / h;
    };
    cplx r1, r2;
    if (std::abs(d2) >= std::abs(d1) && d2 != cplx{}) {
        quadratic(d2, x, d1, r1, r2); // roots in beta / alpha
        push(e1 + r1 * e2);
        push(e1 + r2 * e2);
    } else if (d1 != cplx{}) {
        quadratic(d1, x, d2, r1, r2); // roots in alpha / beta
        push(r1 * e1 + e2);
        push(r2 * e1 + e2);
    } else {
        push(e1);
        push(e2);
    }
    return out;
}

inline CMat4 basis_projector(int k) {
    CMat4 m = CMat4::Zero();
    m(k, k) = 1.0;
    return m;
}

} // namespace detail

struct LsdOptions {
    int restarts = 16;
    std::uint64_t seed = 0;
    double inner_tol = 1e-8;
    double outer_tol = 1e-6;
    long max_evaluations = 3000; // per restart
    double tol = default_tol;
    double rank_tol = 1e-9;
};

struct LsdCertificates {
    double min_eig_sep = 0.0;
    double min_eig_ph3_sep = 0.0;
    double pure_defect = 0.0;
    double reconstruction_error = 0.0;
};

struct LsdStats {
    int restarts = 0;
    long evaluations = 0;
    std::uint64_t seed = 0;
    int best_restart = -1;
};

struct LsdResult {
    double lambda = 1.0;
    DensityMatrix sep_part = DensityMatrix::trusted(0.25 * CMat4::Identity());
    DensityMatrix pure_part = DensityMatrix::trusted(detail::basis_projector(0));
    bool pure_part_used = true;
    bool converged = true;
    LsdCertificates certificates;
    LsdStats search_stats;
};

namespace detail {

inline LsdCertificates certify(const CMat4& m, double lambda, const CMat4& sep, const CMat4& pure) {
    LsdCertificates c;
    c.min_eig_sep = min_eig(sep);
    c.min_eig_ph3_sep = min_eig(partial_transpose(sep));
    c.pure_defect = purity_defect(pure);
    c.reconstruction_error = (lambda * sep + (1.0 - lambda) * pure - m).norm();
    return c;
}

inline CMat4 hermitian(const CMat4& m) { return 0.5 * (m + m.adjoint()); }

} // namespace detail

namespace detail {

/// Rank two: the separable part can only mix the product vectors of the
/// range, so the optimum is a two-variable problem. In whitened range
/// coordinates, maximise a + b with 1 - a uu^+ - b vv^+ >= 0; the upper
/// edge is b(a) = (1 - a|u|^2) / (|v|^2 - a g), stationary where
/// |v|^2 - a g = |u^+ v|.
inline LsdResult rank_two_lsd(const CMat4& m, const SupportChart& chart, LsdResult res) {
    const CVec4& e1 = chart.basis[0];
    const CVec4& e2 = chart.basis[1];
    std::vector<CVec4> prods = product_vectors(e1, e2);
    auto white = [&](const CVec4& p) {
        return Eigen::Vector2cd(e1.dot(p) / std::sqrt(chart.weights[0]), e2.dot(p) / std::sqrt(chart.weights[1]));
    };
    const Eigen::Vector2cd u = white(prods[0]), v = white(prods[1]);
    const double uu = u.squaredNorm(), vv = v.squaredNorm(), uv = std::abs(u.dot(v));
    const double g = std::max(0.0, uu * vv - uv * uv);
    auto b_of = [&](double a) {
        const double den = vv - a * g;
        return den > 0.0 ? std::max(0.0, (1.0 - a * uu) / den) : 0.0;
    };
    double best_a = 0.0, best = b_of(0.0);
    std::vector<double> candidates{1.0 / uu};
    if (g > 0.0)
        candidates.push_back((vv - uv) / g);
    for (double a : candidates) {
        a = std::clamp(a, 0.0, 1.0 / uu);
        if (a + b_of(a) > best) {
            best = a + b_of(a);
            best_a = a;
        }
    }
    const double a = best_a, b = b_of(a);
    const CMat4 p1 = prods[0] * prods[0].adjoint(), p2 = prods[1] * prods[1].adjoint();
    const CMat4 rest = hermitian(m - a * p1 - b * p2);
    Eigen::SelfAdjointEigenSolver<CMat4> es(rest);
    const CVec4 psi = es.eigenvectors().col(3);
    const CMat4 pi = psi * psi.adjoint();
    const double w = rest.trace().real();
    res.lambda = std::clamp(1.0 - w, 0.0, 1.0);
    const CMat4 sep = res.lambda > 1e-12 ? hermitian((a * p1 + b * p2) / (a + b)) : schmidt_product(psi);
    res.pure_part = DensityMatrix::trusted(pi);
    res.pure_part_used = true;
    res.sep_part = DensityMatrix::trusted(sep);
    res.converged = true;
    res.certificates = certify(m, res.lambda, sep, pi);
    return res;
}

} // namespace detail

/// Optimal decomposition P = S sep + (1 - S) |psi><psi|. The pure part runs
/// over unit vectors in the support of P; for each candidate the largest
/// weight comes from the partial-transpose edge, and a simplex search with
/// seeded restarts maximises it.
inline LsdResult optimal_lsd(const PauliRep& p, const LsdOptions& opt = {}) {
    if (!is_positive(p, opt.tol).satisfied)
        throw invalid_state("optimal_lsd needs a positive state");
    const CMat4 m = to_operator(p);
    LsdResult res;
    res.search_stats.seed = opt.seed;

    if (is_separable(p, opt.tol).satisfied) {
        res.lambda = 1.0;
        res.sep_part = DensityMatrix::trusted(m);
        res.pure_part_used = false;
        res.certificates = detail::certify(m, 1.0, m, res.pure_part.matrix());
        return res;
    }

    const detail::SupportChart chart = detail::support_chart(m, opt.rank_tol);
    const int r = chart.rank();
    if (r == 2)
        return detail::rank_two_lsd(m, chart, res);
    const CMat4 pt_m = partial_transpose(m);

    auto evaluate = [&](const Eigen::VectorXd& x, int anchor) {
        const Eigen::VectorXcd z = chart.coefficients(x, anchor);
        const CVec4 psi = chart.vector(z);
        const CMat4 pt_pi = partial_transpose(psi * psi.adjoint());
        const double cap = std::min(1.0, chart.positivity_cap(z));
        return detail::pure_weight_edge(pt_m, pt_pi, cap);
    };
    // minimised: w - 1 when feasible, the (positive) PT violation otherwise
    auto objective = [&](const Eigen::VectorXd& x, int anchor) {
        const detail::EdgeResult e = evaluate(x, anchor);
        return e.feasible ? e.w - 1.0 : -e.slack;
    };

    const int dim = 2 * (r - 1);
    const int restarts = std::max(1, opt.restarts);
    double best_f = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    int best_anchor = 0;
    bool any_converged = false;
    detail::SimplexOptions sopt;
    sopt.ftol = opt.outer_tol;
    sopt.xtol = std::sqrt(opt.outer_tol) * 1e-2;
    sopt.max_evaluations = opt.max_evaluations;

    for (int k = 0; k < restarts; ++k) {
        const int anchor = k % r;
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
        if (k > 0) {
            std::mt19937_64 rng(derive_seed(opt.seed, static_cast<std::uint64_t>(k)));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (int i = 0; i < dim; ++i)
                x0(i) = gauss(rng);
        }
        const detail::SimplexResult sr =
            detail::nelder_mead([&](const Eigen::VectorXd& x) { return objective(x, anchor); }, x0, sopt);
        res.search_stats.evaluations += sr.evaluations;
        ++res.search_stats.restarts;
        any_converged = any_converged || sr.converged;
        if (sr.f < best_f) {
            best_f = sr.f;
            best_x = sr.x;
            best_anchor = anchor;
            res.search_stats.best_restart = k;
        }
        if (r == 1)
            break; // the only candidate is the support vector itself
    }

    const Eigen::VectorXcd z = chart.coefficients(best_x, best_anchor);
    const CVec4 psi = chart.vector(z);
    const CMat4 pi = psi * psi.adjoint();
    const detail::EdgeResult e = evaluate(best_x, best_anchor);
    res.converged = any_converged && e.feasible;
    res.pure_part = DensityMatrix::trusted(pi);
    CMat4 sep;
    if (!e.feasible) {
        // best effort: keep P whole; the certificates show what went wrong
        res.lambda = 0.0;
        sep = detail::schmidt_product(psi);
    } else {
        res.lambda = 1.0 - e.w;
        sep = res.lambda > 1e-12 ? detail::hermitian((m - e.w * pi) / res.lambda) : detail::schmidt_product(psi);
    }
    res.sep_part = DensityMatrix::trusted(sep);
    res.certificates = detail::certify(m, res.lambda, sep, pi);
    return res;
}

/// Minimum eigenvalue of the partial transpose of a separable state; zero
/// for states on the boundary of the separable set.
inline double barely_separable_residual(const DensityMatrix& sep, double tol = default_tol) {
    const double pos = detail::min_eig(sep.matrix());
    const double ppt = detail::min_eig(partial_transpose(sep.matrix()));
    if (pos < -tol || ppt < -tol)
        throw domain_error("state is not separable (min eigenvalues " + std::to_string(pos) + ", " +
                           std::to_string(ppt) + ")");
    return ppt;
}

// ---------------------------------------------------------------------------
// symmetry inheritance

struct SwapTransform {};
using InvarianceTransform = std::variant<LocalRotation, SwapTransform>;

inline PauliRep apply_transform(const PauliRep& p, const InvarianceTransform& t) {
    return std::visit(
        [&](const auto& x) -> PauliRep {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SwapTransform>)
                return swap_qubits(p);
            else
                return apply_local(p, x);
        },
        t);
}

struct InheritanceReport {
    bool passed = true;
    std::vector<double> sep_defects;  // per transform
    std::vector<double> pure_defects; // empty when the pure part is unused
};

/// Both parts of an optimal decomposition inherit the symmetries of P. The
/// separable part is skipped for S = 0, where it is arbitrary.
inline InheritanceReport check_invariance_inheritance(const PauliRep& p, const LsdResult& result,
                                                      const std::vector<InvarianceTransform>& transforms,
                                                      double tol = default_tol) {
    const PauliRep sep = from_operator(result.sep_part.matrix());
    const PauliRep pure = from_operator(result.pure_part.matrix());
    InheritanceReport rep;
    for (const auto& t : transforms) {
        if (const double d = apply_transform(p, t).distance(p); d > tol)
            throw domain_error("transform does not fix the state (defect " + std::to_string(d) + ")");
        const double ds = result.lambda > 1e-12 ? apply_transform(sep, t).distance(sep) : 0.0;
        rep.sep_defects.push_back(ds);
        rep.passed = rep.passed && ds <= 10.0 * tol;
        if (result.pure_part_used) {
            const double dp = apply_transform(pure, t).distance(pure);
            rep.pure_defects.push_back(dp);
            rep.passed = rep.passed && dp <= 10.0 * tol;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// S + C

struct ConjectureRecord {
    double s_value = 0.0;
    double c_value = 0.0;
    double sum = 0.0;
    ClassLabel cls;
    std::uint64_t state_seed = 0;
    bool converged = true;
};

inline ConjectureRecord conjecture_check(const PauliRep& p, const LsdOptions& opt = {}, std::uint64_t state_seed = 0) {
    ConjectureRecord rec;
    const LsdResult lsd = optimal_lsd(p, opt);
    rec.s_value = lsd.lambda;
    rec.c_value = concurrence(p, opt.tol).value;
    rec.sum = rec.s_value + rec.c_value;
    rec.cls = class_of(p, opt.tol);
    rec.state_seed = state_seed;
    rec.converged = lsd.converged;
    return rec;
}

} // namespace pauliscope
