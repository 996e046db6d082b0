#include "oracles.hpp"
#include "pauliscope/entangle.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace pauliscope;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

DensityMatrix projector(CVec4 v) {
    v.normalize();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix singlet() { return projector(CVec4(0.0, 1.0, -1.0, 0.0)); }

PauliRep from(const DensityMatrix& d) { return from_operator(d.matrix()); }

} // namespace

TEST_CASE("concurrence of the named families", "[entangle]") {
    for (double p : {0.0, 0.6, 1.0})
        REQUIRE(concurrence(pure_state(p)).value == Approx(std::sqrt(1 - p * p)).margin(1e-12));
    for (int k = 0; k <= 10; ++k) {
        const double p = 0.1 * k;
        REQUIRE(concurrence(pure_state(p)).value == Approx(std::sqrt(1 - p * p)).margin(1e-9));
    }
    REQUIRE(concurrence(rank2_state(0.5, pi / 3)).value == Approx(0.25).margin(1e-12));
    for (double x : {0.1, 0.5, 0.9})
        for (double th : {0.0, pi / 6, pi / 3, 1.2})
            REQUIRE(concurrence(rank2_state(x, th)).value == Approx(std::abs(x * std::cos(th))).margin(1e-9));
    REQUIRE(concurrence(werner_state(0.6)).value == Approx(0.4).margin(1e-12));
    REQUIRE(concurrence(werner_state(0.2)).value == 0.0);
    REQUIRE(concurrence(product_state(Vec3(0.2, 0.3, 0.4), Vec3(0, 0, 1))).value == 0.0);

    const ConcurrenceResult w = concurrence(werner_state(0.6));
    // P bar = P, so the r values are the eigenvalues of P
    REQUIRE(w.r_values[0] == Approx(0.1).margin(1e-12));
    REQUIRE(w.r_values[3] == Approx(0.7).margin(1e-12));
}

TEST_CASE("concurrence against the Wootters product oracle", "[entangle]") {
    std::mt19937_64 rng(51);
    for (int n = 0; n < 500; ++n) {
        const PauliRep p = random_state(rng());
        const ConcurrenceResult c = concurrence(p);
        REQUIRE(c.value == Approx(oracle::concurrence(oracle::density(p.s, p.t, p.c))).margin(1e-7));
        REQUIRE(concurrence(hw_transform(p)).value == Approx(c.value).margin(1e-10));
        REQUIRE(std::is_sorted(c.r_values.begin(), c.r_values.end()));
        REQUIRE(c.r_values[0] >= 0.0);
    }
}

TEST_CASE("concurrence vanishes exactly on separable states", "[entangle]") {
    std::mt19937_64 rng(52);
    for (int n = 0; n < 1000; ++n) {
        const PauliRep p = random_state(rng());
        REQUIRE((concurrence(p).value > 0.0) == !is_separable(p).satisfied);
    }
}

TEST_CASE("concurrence refuses non-positive input", "[entangle]") {
    PauliRep bad;
    bad.s = Vec3(2, 0, 0);
    REQUIRE_THROWS_AS(concurrence(bad), invalid_state);
    REQUIRE_THROWS_AS(optimal_lsd(bad), invalid_state);
}

TEST_CASE("lsd_lambda_max examples", "[entangle]") {
    REQUIRE(lsd_lambda_max(werner_state(0.6), singlet()) == Approx(0.6).margin(1e-7));
    REQUIRE(lsd_lambda_max(werner_state(0.2), singlet()) == 1.0);
    REQUIRE(lsd_lambda_max(product_state(Vec3(0, 0, 1), Vec3(1, 0, 0)), projector(CVec4(1, 0, 0, 0))) == 1.0);
    REQUIRE(lsd_lambda_max(bell_state(), singlet()) == 0.0);
    // Werner remainder x' = (x - 1 + lambda)/lambda is separable iff x' <= 1/3
    for (double x : {0.4, 0.8, 1.0})
        REQUIRE(lsd_lambda_max(werner_state(x), singlet()) == Approx(1.5 * (1 - x)).margin(1e-7));
    // not a projector
    REQUIRE_THROWS_AS(lsd_lambda_max(werner_state(0.6), DensityMatrix(CMat4(0.25 * CMat4::Identity()))),
                      domain_error);
}

TEST_CASE("grid-and-bisection and the Newton edge give the same lambda", "[entangle]") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> g;
    int compared = 0;
    for (int n = 0; n < 60; ++n) {
        const PauliRep p = random_state(rng());
        if (is_separable(p).satisfied)
            continue;
        const CMat4 m = to_operator(p);
        const detail::SupportChart chart = detail::support_chart(m, 1e-9);
        Eigen::VectorXd x(2 * (chart.rank() - 1));
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x(i) = 0.3 * g(rng);
        const Eigen::VectorXcd z = chart.coefficients(x, 0);
        const CVec4 psi = chart.vector(z);
        const DensityMatrix pure = projector(psi);
        const detail::EdgeResult e = detail::pure_weight_edge(
            partial_transpose(m), partial_transpose(pure.matrix()), std::min(1.0, chart.positivity_cap(z)));
        const double lam = lsd_lambda_max(p, pure);
        if (e.feasible)
            REQUIRE(1.0 - e.w == Approx(lam).margin(1e-6));
        else
            REQUIRE(lam < 1e-6);
        ++compared;
    }
    REQUIRE(compared > 20);
}

TEST_CASE("optimal_lsd closed forms", "[entangle]") {
    for (double x : {0.1, 0.5, 0.9})
        for (double th : {0.0, pi / 6, pi / 3}) {
            const LsdResult r = optimal_lsd(rank2_state(x, th));
            REQUIRE(r.lambda == Approx(1 - x).margin(1e-3));
            REQUIRE(r.certificates.reconstruction_error <= 1e-8);
        }
    for (double x : {0.4, 0.6, 0.8, 1.0}) {
        const LsdResult r = optimal_lsd(werner_state(x));
        REQUIRE(r.lambda == Approx(1 - std::max(0.0, (3 * x - 1) / 2)).margin(1e-3));
    }
    REQUIRE(optimal_lsd(pure_state(0.5)).lambda <= 1e-6);
    REQUIRE(optimal_lsd(bell_state()).lambda <= 1e-6);
}

TEST_CASE("optimal_lsd on separable input", "[entangle]") {
    const PauliRep p = product_state(Vec3(0, 0, 1), Vec3(0, 0, 1));
    const LsdResult r = optimal_lsd(p);
    REQUIRE(r.lambda == 1.0);
    REQUIRE_FALSE(r.pure_part_used);
    REQUIRE(r.certificates.reconstruction_error < 1e-15);
    REQUIRE(optimal_lsd(werner_state(0.3)).lambda == 1.0);
}

TEST_CASE("optimal_lsd certificates on random states", "[entangle]") {
    std::mt19937_64 rng(54);
    LsdOptions opt;
    opt.restarts = 8;
    for (int n = 0; n < 40; ++n) {
        const PauliRep p = random_state(rng(), n % 4 ? RandomMeasure::hilbert_schmidt()
                                                      : RandomMeasure::rank_constrained(2 + n % 3));
        opt.seed = static_cast<std::uint64_t>(n);
        const LsdResult r = optimal_lsd(p, opt);
        REQUIRE(r.lambda >= 0.0);
        REQUIRE(r.lambda <= 1.0);
        REQUIRE(r.certificates.reconstruction_error <= 1e-8);
        REQUIRE(r.certificates.pure_defect <= 1e-8);
        REQUIRE(r.certificates.min_eig_sep >= -1e-9);
        REQUIRE(r.certificates.min_eig_ph3_sep >= -1e-9);
        if (r.pure_part_used) {
            REQUIRE(r.converged);
            // barely separable
            REQUIRE(r.certificates.min_eig_ph3_sep <= 10 * opt.outer_tol);
        }
        // pseudo-mixture bound
        const double m = oracle::min_eig(oracle::partial_transpose_b(to_operator(p)));
        REQUIRE(m >= -(1 - r.lambda) / 2 - 1e-9);
        // pure part lives in the support of P
        const Vec4 ev = oracle::eigenvalues(to_operator(p));
        if (ev(0) < 1e-12) {
            Eigen::SelfAdjointEigenSolver<CMat4> es(to_operator(p));
            const CVec4 null = es.eigenvectors().col(0);
            if (r.pure_part_used)
                REQUIRE(std::abs(null.dot(r.pure_part.matrix() * null)) < 1e-9);
        }
    }
}

TEST_CASE("rank-two states: product vectors of the range and a brute-force edge", "[entangle]") {
    std::mt19937_64 rng(91);
    int entangled = 0;
    for (int n = 0; n < 30; ++n) {
        const PauliRep p = random_state(rng(), RandomMeasure::rank_constrained(2));
        const CMat4 m = to_operator(p);
        if (oracle::min_eig(oracle::partial_transpose_b(m)) >= 0.0)
            continue;
        ++entangled;
        Eigen::SelfAdjointEigenSolver<CMat4> es(m);
        const CVec4 e1 = es.eigenvectors().col(3), e2 = es.eigenvectors().col(2);
        const auto prods = detail::product_vectors(e1, e2);
        REQUIRE(prods.size() == 2);
        for (const CVec4& v : prods) {
            REQUIRE(std::abs(v(0) * v(3) - v(1) * v(2)) < 1e-12);
            const CVec4 off = v - e1 * e1.dot(v) - e2 * e2.dot(v);
            REQUIRE(off.norm() < 1e-12);
        }
        // largest a + b with P - a P1 - b P2 >= 0, by scanning a and bisecting b
        const CMat4 p1 = prods[0] * prods[0].adjoint(), p2 = prods[1] * prods[1].adjoint();
        auto ok = [&](double a, double b) { return oracle::min_eig(m - a * p1 - b * p2) >= -1e-13; };
        auto edge = [&](double a) {
            double lo = 0.0, hi = 1.0;
            for (int k = 0; k < 60; ++k)
                (ok(a, 0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
            return a + lo;
        };
        double a_max = 0.0, a_hi = 1.0;
        for (int k = 0; k < 60; ++k)
            (ok(0.5 * (a_max + a_hi), 0.0) ? a_max : a_hi) = 0.5 * (a_max + a_hi);
        // a + b(a) is concave on [0, a_max]
        double lo = 0.0, hi = a_max;
        for (int k = 0; k < 100; ++k) {
            const double x1 = lo + (hi - lo) / 3, x2 = hi - (hi - lo) / 3;
            if (edge(x1) < edge(x2))
                lo = x1;
            else
                hi = x2;
        }
        const double best = std::max({edge(0.0), edge(a_max), edge(0.5 * (lo + hi))});
        const LsdResult r = optimal_lsd(p);
        REQUIRE(r.lambda == Approx(best).margin(1e-5));
        REQUIRE(r.lambda >= best - 1e-9);
        REQUIRE(r.certificates.reconstruction_error <= 1e-10);
        REQUIRE(r.certificates.pure_defect <= 1e-10);
        REQUIRE(oracle::min_eig(oracle::partial_transpose_b(r.sep_part.matrix())) >= -1e-10);
        // same lambda from the pure part alone
        REQUIRE(lsd_lambda_max(p, r.pure_part) == Approx(r.lambda).margin(1e-6));
    }
    REQUIRE(entangled > 10);
}

TEST_CASE("optimal_lsd is deterministic for a fixed seed", "[entangle]") {
    const PauliRep p = random_state(77);
    LsdOptions opt;
    opt.seed = 5;
    const LsdResult a = optimal_lsd(p, opt), b = optimal_lsd(p, opt);
    REQUIRE(a.lambda == b.lambda);
    REQUIRE(a.search_stats.evaluations == b.search_stats.evaluations);
    REQUIRE((a.pure_part.matrix() - b.pure_part.matrix()).norm() == 0.0);
}

TEST_CASE("Bell state: pseudo-mixture bound holds with equality", "[entangle]") {
    const LsdResult r = optimal_lsd(bell_state());
    const double m = oracle::min_eig(to_operator(ph3_transform(bell_state())));
    REQUIRE(m == Approx(-0.5).margin(1e-12));
    REQUIRE(m == Approx(-(1 - r.lambda) / 2).margin(1e-6));
}

TEST_CASE("barely_separable_residual", "[entangle]") {
    const LsdResult r = optimal_lsd(werner_state(0.6));
    REQUIRE(std::abs(barely_separable_residual(r.sep_part)) < 1e-6);
    // the optimal separable part is the x = 1/3 Werner state
    REQUIRE(from(r.sep_part).distance(werner_state(1.0 / 3.0)) < 1e-6);
    REQUIRE(barely_separable_residual(DensityMatrix(CMat4(0.25 * CMat4::Identity()))) == Approx(0.25));
    REQUIRE(std::abs(barely_separable_residual(to_matrix(werner_state(1.0 / 3.0)))) < 1e-15);
    REQUIRE_THROWS_AS(barely_separable_residual(to_matrix(bell_state())), domain_error);
}

TEST_CASE("symmetries of P are inherited by its optimal decomposition", "[entangle]") {
    const PauliRep w = werner_state(0.6);
    const LsdResult r = optimal_lsd(w);
    std::mt19937_64 rng(55);
    std::vector<InvarianceTransform> ts;
    for (int k = 0; k < 5; ++k) {
        const Mat3 rot = random_rotation(rng);
        ts.emplace_back(LocalRotation(rot, rot));
    }
    ts.emplace_back(SwapTransform{});
    ts.emplace_back(LocalRotation{});
    const InheritanceReport rep = check_invariance_inheritance(w, r, ts, 1e-7);
    REQUIRE(rep.passed);
    REQUIRE(rep.sep_defects.size() == ts.size());
    REQUIRE(rep.pure_defects.size() == ts.size());

    // a transform that does not fix P
    const Mat3 rot = oracle::rotation(Vec3(0, 0, 1), 0.3);
    const PauliRep r2 = rank2_state(0.5, 0.4);
    REQUIRE_THROWS_AS(check_invariance_inheritance(r2, optimal_lsd(r2), {LocalRotation(rot, Mat3::Identity())}),
                      domain_error);
    // identity always passes
    const PauliRep any = random_state(3);
    REQUIRE(check_invariance_inheritance(any, optimal_lsd(any), {LocalRotation{}}).passed);
}

TEST_CASE("conjecture_check examples", "[entangle]") {
    const ConjectureRecord a = conjecture_check(rank2_state(0.5, pi / 3));
    REQUIRE(a.s_value == Approx(0.5).margin(1e-3));
    REQUIRE(a.c_value == Approx(0.25).margin(1e-9));
    REQUIRE(a.sum == Approx(0.75).margin(1e-3));
    REQUIRE(conjecture_check(werner_state(0.6)).sum == Approx(1.0).margin(1e-3));
    const ConjectureRecord c = conjecture_check(product_state(Vec3(0, 0, 1), Vec3(0, 0, 1)), {}, 42);
    REQUIRE(c.s_value == 1.0);
    REQUIRE(c.c_value == 0.0);
    REQUIRE(c.sum == 1.0);
    REQUIRE(c.state_seed == 42);
    REQUIRE(c.cls.label == FamilyClass::C);
}
