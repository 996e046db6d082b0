// cli.hpp: the pauliscope command line, callable in-process

#pragma once

#include "classify.hpp"
#include "criteria.hpp"
#include "entangle.hpp"
#include "invariants.hpp"
#include "io.hpp"
#include "scan.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace pauliscope::cli {

enum exit_code : int { ok = 0, bad_state = 1, bad_parse = 2, no_convergence = 3, io_failure = 4 };

struct Options {
    std::string input = "-";
    std::string format = "auto";
    double tol = default_tol;
    std::uint64_t seed = 0;
    std::uint64_t samples = 1000;
    int restarts = 16;
    int jobs = 1;
    std::string out;
    std::string emit;
    bool strict = false;
    double violation_tol = default_violation_tol;
};

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-")
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open input file '" + path + "'");
    std::string text{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    if (f.bad())
        throw io_error("error reading '" + path + "'");
    return text;
}

inline InputFormat input_format(const std::string& f) {
    if (f == "pauli")
        return InputFormat::pauli;
    if (f == "matrix")
        return InputFormat::matrix;
    return InputFormat::automatic;
}

inline double tol_from_env(double fallback) {
    const char* v = std::getenv("PAULISCOPE_TOL");
    if (v == nullptr || *v == '\0')
        return fallback;
    char* end = nullptr;
    const double x = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(x > 0.0))
        throw parse_error(std::string("PAULISCOPE_TOL: not a positive number: '") + v + "'");
    return x;
}

inline json with_label(json j, const StateDocument& doc) {
    if (doc.label)
        j["label"] = *doc.label;
    return j;
}

inline int fail(std::ostream& err, int code, const std::string& what) {
    err << "error: " << what << '\n';
    return code;
}

inline int exit_for(const error& e) {
    switch (e.code()) {
    case error::kind::parse:
        return bad_parse;
    case error::kind::io:
        return io_failure;
    default:
        return bad_state;
    }
}

/// Runs one state command; the report goes to `report`.
inline int state_command(const std::string& cmd, const Options& o, const StateDocument& doc, std::ostream& report,
                         std::ostream& err) {
    const PauliRep& p = doc.state;
    const CriterionReport pos = is_positive(p, o.tol);
    if (!pos.satisfied && (o.strict || cmd == "concurrence" || cmd == "lsd"))
        return fail(err, bad_state, "state is not positive (min eigenvalue " + format_real(pos.min_eigenvalue) + ")");

    json j;
    if (cmd == "classify") {
        if (pos.satisfied) {
            j = to_json(canonicalize(p, o.tol).descriptor);
        } else {
            const CharacteristicDecomposition d = characteristic_decomposition(p.c, o.tol);
            j = to_json(class_of(d, o.tol));
            j["c"] = to_json(d.c);
        }
        j["positive"] = pos.satisfied;
    } else if (cmd == "invariants") {
        const GlobalInvariants g = global_invariants(p);
        const auto [a, b] = auxiliary_ab(p);
        j = {{"A", to_json(g)}, {"local", to_json(local_invariants(p))}, {"a", a}, {"b", b}};
        try {
            const QuarticRoots k = quartic_roots(g);
            j["roots"] = {k[0], k[1], k[2], k[3]};
        } catch (const no_real_roots& e) {
            j["roots"] = nullptr;
            j["roots_error"] = e.what();
        }
        j["positive"] = pos.satisfied;
    } else if (cmd == "check") {
        j = {{"positive", to_json(pos)}, {"separable", nullptr}};
        if (pos.satisfied)
            j["separable"] = to_json(is_separable(p, o.tol));
    } else if (cmd == "concurrence") {
        j = to_json(concurrence(p, o.tol));
    } else if (cmd == "lsd") {
        LsdOptions lo;
        lo.restarts = o.restarts;
        lo.seed = o.seed;
        lo.tol = o.tol;
        const LsdResult r = optimal_lsd(p, lo);
        j = to_json(r);
        if (!r.converged) {
            err << with_label(j, doc).dump(2) << '\n';
            return fail(err, no_convergence, "optimizer did not converge in any restart");
        }
    } else if (cmd == "convert") {
        j = doc.source == InputFormat::pauli ? matrix_document(p) : pauli_document(p);
    }
    report << with_label(j, doc).dump(2) << '\n';
    return ok;
}

inline int scan_command(const Options& o, std::ostream& report, std::ostream& err) {
    LsdOptions lo;
    lo.restarts = o.restarts;
    lo.tol = o.tol;
    const std::vector<ScanRow> rows = run_scan(o.samples, o.seed, lo, o.jobs);
    if (o.emit == "json")
        report << scan_json(rows, o.violation_tol).dump(2) << '\n';
    else
        write_scan_csv(report, rows);
    const auto bad = violations(rows, o.violation_tol);
    for (const std::uint64_t i : bad)
        err << "violation: index=" << i << " seed=" << rows[i].seed << " sum=" << format_real(rows[i].sum) << '\n';
    long unconverged = 0;
    for (const ScanRow& r : rows)
        unconverged += r.converged ? 0 : 1;
    if (unconverged > 0)
        err << "unconverged: " << unconverged << '\n';
    err << "violations: " << bad.size() << '\n';
    return ok;
}

inline int write_report(const Options& o, const std::string& text, std::ostream& out, std::ostream& err) {
    if (o.out.empty()) {
        out << text;
        out.flush();
        return out ? ok : fail(err, io_failure, "cannot write to standard output");
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f)
        return fail(err, io_failure, "cannot open output file '" + o.out + "'");
    f << text;
    f.close();
    return f ? ok : fail(err, io_failure, "error writing '" + o.out + "'");
}

} // namespace detail

/// Parses `args` (without the program name) and runs the command. Reports
/// go to `out` (or --out) only on success; diagnostics go to `err`.
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                       std::ostream& err) {
    Options o;
    CLI::App app{"Two-qubit state analysis in the Pauli representation", "pauliscope"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pauliscope 0.1.0");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"classify", "class label and canonical family parameters"},
        {"invariants", "global and local invariants, a and b"},
        {"check", "positivity and separability reports"},
        {"concurrence", "concurrence and the r values"},
        {"lsd", "optimal Lewenstein-Sanpera decomposition"},
        {"scan", "S + C scan over Hilbert-Schmidt random states"},
        {"convert", "re-serialise between pauli and matrix forms"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help)->fallthrough();

    bool tol_given = false;
    app.add_option("--input", o.input, "state document, - for stdin")->capture_default_str();
    app.add_option("--format", o.format, "input representation")
        ->check(CLI::IsMember({"auto", "pauli", "matrix"}))
        ->capture_default_str();
    app.add_option_function<double>(
           "--tol", [&](double v) { o.tol = v; tol_given = true; }, "numerical tolerance (default 1e-9)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--samples", o.samples, "scan sample count")->capture_default_str();
    app.add_option("--restarts", o.restarts, "optimizer restarts")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--jobs", o.jobs, "scan worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", o.out, "write the report here instead of stdout");
    app.add_option("--emit", o.emit, "report format for scan (csv default)")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--violation-tol", o.violation_tol, "scan: flag rows with S + C > 1 + this")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_flag("--strict", o.strict, "non-positive input is an error (exit 1)");

    std::vector<std::string> argv_store{"pauliscope"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : bad_parse;
    }

    try {
        if (!tol_given)
            o.tol = detail::tol_from_env(default_tol);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd != "scan" && o.emit == "csv")
            throw parse_error("--emit csv is only available for scan");

        std::ostringstream report;
        int code = ok;
        if (cmd == "scan") {
            code = detail::scan_command(o, report, err);
        } else {
            const StateDocument doc =
                parse_state(detail::read_input(o.input, in), detail::input_format(o.format), o.tol);
            code = detail::state_command(cmd, o, doc, report, err);
        }
        if (code != ok)
            return code;
        return detail::write_report(o, report.str(), out, err);
    } catch (const invalid_input& e) {
        std::string msg = e.what();
        if (e.defect() > 0.0)
            msg += " [defect " + format_real(e.defect()) + "]";
        return detail::fail(err, bad_state, msg);
    } catch (const error& e) {
        return detail::fail(err, detail::exit_for(e), e.what());
    } catch (const std::exception& e) {
        return detail::fail(err, bad_state, e.what());
    }
}

} // namespace pauliscope::cli
