#include "pauliscope/cli.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace pauliscope;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_command(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string sample(const std::string& name) { return std::string(PAULISCOPE_SAMPLES) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const char* bell_doc = R"({"pauli":{"s":[0,0,0],"t":[0,0,0],"C":[[-1,0,0],[0,-1,0],[0,0,-1]]}})";

} // namespace

TEST_CASE("parse_state: both representations", "[cli]") {
    const StateDocument b = parse_state(bell_doc);
    REQUIRE(b.state.distance(bell_state()) == 0.0);
    REQUIRE(b.source == InputFormat::pauli);
    const StateDocument c = parse_state(R"({"label":"x","matrix":[[[0.25,0],0,0,0],[0,[0.25,0],0,0],[0,0,0.25,0],[0,0,0,0.25]]})");
    REQUIRE(c.state.distance(PauliRep::chaotic()) < 1e-16);
    REQUIRE(c.label == std::optional<std::string>("x"));
    // parses even though it is not positive
    REQUIRE_NOTHROW(parse_state(R"({"pauli":{"s":[2,0,0],"t":[0,0,0],"C":[[0,0,0],[0,0,0],[0,0,0]]}})"));
}

TEST_CASE("parse_state: schema and validation errors", "[cli]") {
    REQUIRE_THROWS_AS(parse_state("{"), parse_error);
    REQUIRE_THROWS_AS(parse_state("{}"), parse_error);
    REQUIRE_THROWS_AS(parse_state(R"({"pauli":{"s":[0,0],"t":[0,0,0],"C":[[0,0,0],[0,0,0],[0,0,0]]}})"), parse_error);
    REQUIRE_THROWS_AS(parse_state(R"({"pauli":{"s":[0,0,"a"],"t":[0,0,0],"C":[[0,0,0],[0,0,0],[0,0,0]]}})"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_state(bell_doc, InputFormat::matrix), parse_error);
    try {
        parse_state("{\n\"pauli\": \n  [1,,2]}");
        FAIL("no error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_state(R"({"pauli":{"s":[0,0,0],"t":[0,0,0]}})");
        FAIL("no error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("pauli.C") != std::string::npos);
    }
    // not Hermitian, wrong trace
    REQUIRE_THROWS_AS(parse_state(R"({"matrix":[[0.25,0.1,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]})"),
                      invalid_input);
    REQUIRE_THROWS_AS(parse_state(R"({"matrix":[[0.5,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]})"),
                      invalid_input);
}

TEST_CASE("classify on the Bell document", "[cli]") {
    const Run r = run({"classify", "--input", "-"}, bell_doc);
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["class"] == "B");
    REQUIRE(j["sign"] == "-");
    REQUIRE(j["c"][0].get<double>() == Approx(1.0));
    REQUIRE(j["c"][2].get<double>() == Approx(1.0));
    REQUIRE(j["positive"] == true);
}

TEST_CASE("check on the Werner 0.5 document", "[cli]") {
    const Run r = run({"check", "--input", sample("werner_0.5.json")});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["positive"]["satisfied"] == true);
    REQUIRE(j["separable"]["satisfied"] == false);
    REQUIRE(j["separable"]["min_eigenvalue"].get<double>() == Approx(-0.125));
    REQUIRE(j["label"] == "Werner x=0.5");
}

TEST_CASE("invariants, concurrence, lsd and convert", "[cli]") {
    const Run inv = run({"invariants"}, bell_doc);
    REQUIRE(inv.code == 0);
    const json i = json::parse(inv.out);
    REQUIRE(i["A"][0].get<double>() == Approx(6.0));
    REQUIRE(i["A"][1].get<double>() == Approx(8.0));
    REQUIRE(i["A"][2].get<double>() == Approx(3.0));
    REQUIRE(i["local"]["det_c"].get<double>() == Approx(-1.0));
    REQUIRE(i.contains("a"));
    REQUIRE(i["roots"].size() == 4);

    const Run conc = run({"concurrence", "--input", sample("rank2.json")});
    REQUIRE(conc.code == 0);
    REQUIRE(json::parse(conc.out)["value"].get<double>() == Approx(0.25).margin(1e-9));

    const Run lsd = run({"lsd", "--input", sample("werner_0.5.json"), "--restarts", "4", "--seed", "3"});
    REQUIRE(lsd.code == 0);
    const json l = json::parse(lsd.out);
    REQUIRE(l["lambda"].get<double>() == Approx(0.75).margin(1e-3));
    REQUIRE(l["certificates"]["reconstruction_error"].get<double>() < 1e-8);
    REQUIRE(l["search_stats"]["seed"] == 3);

    const Run conv = run({"convert", "--input", sample("bell.json")});
    REQUIRE(conv.code == 0);
    const StateDocument m = parse_state(conv.out);
    REQUIRE(m.source == InputFormat::matrix);
    REQUIRE(m.label == std::optional<std::string>("Bell singlet"));
    const Run back = run({"convert"}, conv.out);
    REQUIRE(back.code == 0);
    const StateDocument p = parse_state(back.out);
    REQUIRE(p.source == InputFormat::pauli);
    REQUIRE(p.state.distance(bell_state()) < 1e-12);
}

TEST_CASE("convert round trip on random states", "[cli]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const PauliRep s = random_state(seed);
        const Run a = run({"convert"}, pauli_document(s).dump());
        REQUIRE(a.code == 0);
        const Run b = run({"convert"}, a.out);
        REQUIRE(b.code == 0);
        REQUIRE(parse_state(b.out).state.distance(s) < 1e-12);
    }
}

TEST_CASE("exit codes", "[cli]") {
    const std::string bad = sample("nonpositive.json");
    // advisory by default, exit 1 under --strict
    const Run adv = run({"check", "--input", bad});
    REQUIRE(adv.code == 0);
    REQUIRE(json::parse(adv.out)["positive"]["satisfied"] == false);
    REQUIRE(json::parse(adv.out)["separable"].is_null());
    const Run strict = run({"check", "--input", bad, "--strict"});
    REQUIRE(strict.code == 1);
    REQUIRE(strict.out.empty());
    REQUIRE(run({"classify", "--input", bad}).code == 0);
    REQUIRE(run({"classify", "--input", bad, "--strict"}).code == 1);
    // these need a state
    REQUIRE(run({"concurrence", "--input", bad}).code == 1);
    REQUIRE(run({"lsd", "--input", bad}).code == 1);
    // parse errors
    REQUIRE(run({"classify"}, "{not json").code == 2);
    REQUIRE(run({"classify", "--format", "matrix"}, bell_doc).code == 2);
    REQUIRE(run({"frobnicate"}).code == 2);
    REQUIRE(run({"classify", "--tol", "abc"}).code == 2);
    REQUIRE(run({}).code == 2);
    REQUIRE(run({"classify", "--emit", "csv"}, bell_doc).code == 2);
    // invalid matrix -> 1 with the defect
    const Run herm = run({"check"}, R"({"matrix":[[0.25,0.1,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]})");
    REQUIRE(herm.code == 1);
    REQUIRE(herm.err.find("defect") != std::string::npos);
    // I/O
    REQUIRE(run({"classify", "--input", "/nonexistent/x.json"}).code == 4);
    REQUIRE(run({"classify", "--out", "/nonexistent/dir/out.json"}, bell_doc).code == 4);
    // help
    REQUIRE(run({"--help"}).code == 0);
}

TEST_CASE("--out writes the report to a file", "[cli]") {
    const fs::path dir = fs::temp_directory_path() / "pauliscope_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "bell.json";
    const Run r = run({"classify", "--out", out.string()}, bell_doc);
    REQUIRE(r.code == 0);
    REQUIRE(r.out.empty());
    REQUIRE(json::parse(slurp(out))["class"] == "B");
    fs::remove_all(dir);
}

TEST_CASE("tolerance from PAULISCOPE_TOL", "[cli]") {
    // a barely non-Hermitian matrix passes with a loose tolerance only
    const char* doc = R"({"matrix":[[0.25,1e-7,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]})";
    ::unsetenv("PAULISCOPE_TOL");
    REQUIRE(run({"check"}, doc).code == 1);
    ::setenv("PAULISCOPE_TOL", "1e-6", 1);
    REQUIRE(run({"check"}, doc).code == 0);
    // the flag wins over the environment
    REQUIRE(run({"check", "--tol", "1e-9"}, doc).code == 1);
    ::setenv("PAULISCOPE_TOL", "nonsense", 1);
    REQUIRE(run({"check"}, doc).code == 2);
    ::unsetenv("PAULISCOPE_TOL");
}

TEST_CASE("scan: CSV layout, determinism and worker invariance", "[cli]") {
    const Run a = run({"scan", "--samples", "12", "--seed", "7", "--restarts", "4"});
    REQUIRE(a.code == 0);
    const Run b = run({"scan", "--samples", "12", "--seed", "7", "--restarts", "4", "--jobs", "3"});
    REQUIRE(b.code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.err.find("violations: 0") != std::string::npos);

    std::istringstream lines(a.out);
    std::string line;
    std::getline(lines, line);
    REQUIRE(line == "index,seed,class,sign,S,C,sum,separable,m1,m2,m3");
    int n = 0;
    while (std::getline(lines, line)) {
        REQUIRE(line.rfind(std::to_string(n) + ",", 0) == 0);
        REQUIRE(std::count(line.begin(), line.end(), ',') == 10);
        ++n;
    }
    REQUIRE(n == 12);

    const Run empty = run({"scan", "--samples", "0"});
    REQUIRE(empty.code == 0);
    REQUIRE(empty.out == "index,seed,class,sign,S,C,sum,separable,m1,m2,m3\n");

    const Run js = run({"scan", "--samples", "3", "--emit", "json", "--restarts", "2"});
    REQUIRE(js.code == 0);
    const json rows = json::parse(js.out);
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[2]["index"] == 2);
    REQUIRE(rows[0].contains("positive_margins"));
}

TEST_CASE("scan: rows above the bound are reported", "[cli]") {
    std::vector<ScanRow> rows(3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].index = i;
    rows[1].sum = 1.01;
    REQUIRE(violations(rows) == std::vector<std::uint64_t>{1});
    REQUIRE(violations(rows, 0.05).empty());
    const json j = scan_json(rows);
    REQUIRE(j[1]["violation"] == true);
    REQUIRE(j[0]["violation"] == false);
    std::ostringstream csv;
    write_scan_csv(csv, rows);
    const std::string text = csv.str();
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("binary: subprocess round trip", "[cli]") {
    const std::string cmd = std::string(PAULISCOPE_BIN) + " classify --input " + sample("counterexample_p1.json");
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe) != nullptr)
        out += buf;
    const int status = ::pclose(pipe);
    REQUIRE(status == 0);
    const json j = json::parse(out);
    REQUIRE(j["class"] == "F");
    REQUIRE(j["sign"] == "+");
    REQUIRE(j["s"][2].get<double>() == Approx(0.5));

    const std::string strict = std::string(PAULISCOPE_BIN) + " check --strict --input " +
                               sample("nonpositive.json") + " > /dev/null 2>&1";
    const int rc = std::system(strict.c_str());
    REQUIRE(WEXITSTATUS(rc) == 1);
}
