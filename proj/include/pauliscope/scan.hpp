// scan.hpp: batch S + C scan over Hilbert-Schmidt random states

#pragma once

#include "classify.hpp"
#include "criteria.hpp"
#include "entangle.hpp"
#include "statecore.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace pauliscope {

struct ScanRow {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    ClassLabel cls;
    double s = 0.0;
    double c = 0.0;
    double sum = 0.0;
    bool separable = false;
    Margins positive_margins{};
    bool converged = true;
};

/// The sum tolerance of a numerically computed S.
inline constexpr double default_violation_tol = 2e-3;

/// Sample `index` of the scan with master seed `master`. The state and the
/// optimizer restarts both use the derived per-sample seed.
inline ScanRow scan_sample(std::uint64_t master, std::uint64_t index, LsdOptions opt = {}) {
    ScanRow row;
    row.index = index;
    row.seed = derive_seed(master, index);
    const PauliRep p = random_state(row.seed, RandomMeasure::hilbert_schmidt());
    opt.seed = row.seed;
    const ConjectureRecord rec = conjecture_check(p, opt, row.seed);
    row.cls = rec.cls;
    row.s = rec.s_value;
    row.c = rec.c_value;
    row.sum = rec.sum;
    row.converged = rec.converged;
    row.separable = is_separable(p, opt.tol).satisfied;
    row.positive_margins = is_positive(p, opt.tol).margins;
    return row;
}

/// Rows in index order whatever the worker count.
inline std::vector<ScanRow> run_scan(std::uint64_t samples, std::uint64_t master, const LsdOptions& opt = {},
                                     int jobs = 1) {
    std::vector<ScanRow> rows(samples);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        try {
            for (std::uint64_t i = next++; i < samples; i = next++)
                rows[i] = scan_sample(master, i, opt);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure)
                failure = std::current_exception();
            next = samples;
        }
    };
    const int n = std::max(1, jobs);
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n; ++k)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return rows;
}

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << "index,seed,class,sign,S,C,sum,separable,m1,m2,m3\n";
    for (const ScanRow& r : rows) {
        os << r.index << ',' << r.seed << ',' << class_letter(r.cls.label) << ',' << sign_char(r.cls.sign) << ','
           << format_real(r.s) << ',' << format_real(r.c) << ',' << format_real(r.sum) << ','
           << (r.separable ? "true" : "false") << ',' << format_real(r.positive_margins[0]) << ','
           << format_real(r.positive_margins[1]) << ',' << format_real(r.positive_margins[2]) << '\n';
    }
}

inline nlohmann::json scan_json(const std::vector<ScanRow>& rows, double violation_tol = default_violation_tol) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ScanRow& r : rows) {
        arr.push_back({{"index", r.index},
                       {"seed", r.seed},
                       {"class", std::string(1, class_letter(r.cls.label))},
                       {"sign", std::string(1, sign_char(r.cls.sign))},
                       {"S", r.s},
                       {"C", r.c},
                       {"sum", r.sum},
                       {"separable", r.separable},
                       {"positive_margins", {r.positive_margins[0], r.positive_margins[1], r.positive_margins[2]}},
                       {"violation", r.sum > 1.0 + violation_tol}});
    }
    return arr;
}

inline std::vector<std::uint64_t> violations(const std::vector<ScanRow>& rows,
                                             double violation_tol = default_violation_tol) {
    std::vector<std::uint64_t> out;
    for (const ScanRow& r : rows)
        if (r.sum > 1.0 + violation_tol)
            out.push_back(r.index);
    return out;
}

} // namespace pauliscope
