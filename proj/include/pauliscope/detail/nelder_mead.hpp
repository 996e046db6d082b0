// nelder_mead.hpp: derivative-free simplex minimisation, adaptive
// coefficients (Gao & Han) so higher dimensions do not stall

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pauliscope::detail {

struct SimplexResult {
    Eigen::VectorXd x;
    double f = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct SimplexOptions {
    double step = 0.5;
    double ftol = 1e-6;  // spread of f over the simplex
    double xtol = 1e-7;  // simplex diameter, infinity norm
    long max_evaluations = 2000;
};

template <class F>
SimplexResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const SimplexOptions& opt = {}) {
    const Eigen::Index n = x0.size();
    SimplexResult res;
    if (n == 0) {
        res.x = x0;
        res.f = f(x0);
        res.evaluations = 1;
        res.converged = true;
        return res;
    }
    const double dn = static_cast<double>(n);
    const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> val(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i + 1)](i) += opt.step;
    for (std::size_t i = 0; i < pts.size(); ++i)
        val[i] = f(pts[i]);
    res.evaluations = n + 1;

    std::vector<std::size_t> order(pts.size());
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

        double diam = 0.0;
        for (const auto& p : pts)
            diam = std::max(diam, (p - pts[best]).cwiseAbs().maxCoeff());
        if (val[worst] - val[best] <= opt.ftol && diam <= opt.xtol) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= opt.max_evaluations)
            break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst)
                centroid += pts[i];
        centroid /= dn;

        const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
        const double fr = f(xr);
        ++res.evaluations;
        if (fr < val[best]) {
            const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            const double fe = f(xe);
            ++res.evaluations;
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                           : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
        const double fc = f(xc);
        ++res.evaluations;
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best)
                continue;
            pts[i] = pts[best] + delta * (pts[i] - pts[best]);
            val[i] = f(pts[i]);
            ++res.evaluations;
        }
    }
    const auto it = std::min_element(val.begin(), val.end());
    res.f = *it;
    res.x = pts[static_cast<std::size_t>(it - val.begin())];
    return res;
}

} // namespace pauliscope::detail
