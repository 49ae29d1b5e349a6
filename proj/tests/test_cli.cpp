#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli.hpp"
#include "tlft/specfun.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

using namespace tlft;
using tlft::cli::Json;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

std::vector<std::string> split(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> v;
    for (std::string t; in >> t;) v.push_back(t);
    return v;
}

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

Outcome run(const std::string& line) { return run(split(line)); }

const Json* find_value(const Json& report, const std::string& name) {
    for (const auto& v : report["values"])
        if (v["name"] == name) return &v;
    return nullptr;
}

std::string temp_path(const std::string& name) { return "/tmp/tlft_test_cli_" + name; }

}  // namespace

TEST_CASE("parse_complex") {
    CHECK(cli::parse_complex("1.5") == Complex(1.5, 0.0));
    CHECK(cli::parse_complex("-0.3+0.2i") == Complex(-0.3, 0.2));
    CHECK(cli::parse_complex("-0.1-2i") == Complex(-0.1, -2.0));
    CHECK(cli::parse_complex("0.2i") == Complex(0.0, 0.2));
    CHECK(cli::parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(cli::parse_complex("0.5,-0.25") == Complex(0.5, -0.25));
    CHECK(cli::parse_complex("1e-3+2e-1i") == Complex(1e-3, 0.2));
    CHECK_THROWS_AS(cli::parse_complex("abc"), Error);
    CHECK_THROWS_AS(cli::parse_complex(""), Error);
    CHECK(cli::parse_complex("1+2j") == Complex(1.0, 2.0));
    CHECK_THROWS_AS(cli::parse_complex("1+2k"), Error);
}

TEST_CASE("complex JSON round trip") {
    for (Complex z : {Complex(0.1, -0.2), Complex(-0.0, 0.0), Complex(1e300, -1e-300)}) {
        Json j = cli::complex_json(z);
        CHECK(j.begin().key() == "re");
        Complex back = cli::complex_from_json(Json::parse(j.dump()));
        CHECK(back == z);
    }
}

TEST_CASE("verify suite example") {
    auto o = run("verify --suite theorems --mu 1.0");
    CHECK(o.code == 0);
    Json r = Json::parse(o.out);
    CHECK(r["schema"] == 1);
    CHECK(r["command"] == "verify");
    std::set<std::string> names;
    for (const auto& c : r["checks"]) {
        names.insert(c["name"].get<std::string>());
        INFO(c.dump());
        CHECK(c["pass"] == true);
    }
    for (const char* n : {"series_contour_identity", "zero_point_limit", "hankel_zero_point", "one_point_limit",
                          "one_point_hankel_ratio", "two_point_limit", "imaginary_w_residue", "three_point_limit",
                          "three_point_hankel_ratio", "ac_zero_point"})
        CHECK(names.count(n) == 1);
}

TEST_CASE("verify reports a failed check with exit 1") {
    auto o = run("verify --suite theorems --mu 1.0 --tol zero_limit=1e-12");
    CHECK(o.code == 1);
    Json r = Json::parse(o.out);
    bool failed = false;
    for (const auto& c : r["checks"])
        if (c["name"] == "zero_point_limit") failed = c["pass"] == false;
    CHECK(failed);
}

TEST_CASE("coefficient oracle example") {
    auto o = run("coeff --case zero --n 2 --oracle mc --samples 1e6 --seed 42");
    REQUIRE(o.code == 0);
    Json r = Json::parse(o.out);
    CHECK(r["seed"] == 42);
    const double closed = 8.0 * kPi * kPi * std::exp(1.0);
    const Json* c = find_value(r, "coeff");
    const Json* m = find_value(r, "oracle");
    REQUIRE(c);
    REQUIRE(m);
    CHECK(cli::complex_from_json((*c)["value"]).real() == doctest::Approx(closed).epsilon(1e-13));
    CHECK((*c)["provenance"] == "closed-form");
    CHECK((*m)["provenance"] == "oracle");
    double est = cli::complex_from_json((*m)["value"]).real();
    double se = (*m)["error"].get<double>();
    CHECK(se > 0.0);
    CHECK(std::abs(est - closed) < std::max(3.0 * se, 0.01 * closed));
}

TEST_CASE("zero-mode limit example") {
    auto o = run("zeromode --case zero --mu 2.0 --schedule default");
    REQUIRE(o.code == 0);
    Json r = Json::parse(o.out);
    const Json* v = find_value(r, "limit");
    REQUIRE(v);
    double expect = std::exp(1.0) / (4.0 * kPi * std::sqrt(2.0) * 2.0);
    CHECK(std::abs(cli::complex_from_json((*v)["value"]).real() / expect - 1.0) < 1e-4);
    CHECK((*v)["provenance"] == "extrapolation");
}

TEST_CASE("usage errors exit with 2") {
    for (std::string line : {"", "bogus", "coeff --case four --n 1", "coeff --case zero --n -1", "coeff --case zero --n 2 --frobnicate",
                             "correlator --case one --alpha 1+2k", "verify --suite nope", "--format xml coeff --n 1",
                             "verify --tol nothing=1", "pair --kind delta --bump 0.3"}) {
        INFO(line);
        CHECK(run(line).code == 2);
    }
    CHECK(run("--help").code == 0);
}

TEST_CASE("numerical errors exit with 1 and are reported") {
    auto o = run("correlator --case zero --mu 2 --c 0 --method series");
    CHECK(o.code == 1);
    Json r = Json::parse(o.out);
    CHECK(r["error"].get<std::string>().find("TruncationFailure") != std::string::npos);
}

TEST_CASE("panel files reject unknown keys") {
    std::string path = temp_path("panel.json");
    std::ifstream in(cli::default_panel_path());
    Json p = Json::parse(in);
    p["surprise"] = 1;
    std::ofstream(path) << p.dump();
    CHECK_THROWS_AS(cli::load_panel(path), Error);
    CHECK(run("verify --panel " + path).code == 2);
    p.erase("surprise");
    p["pairing"]["extra"] = 0.1;
    std::ofstream(path) << p.dump();
    CHECK_THROWS_AS(cli::load_panel(path), Error);
    std::remove(path.c_str());
    CHECK_NOTHROW(cli::load_panel(cli::default_panel_path()));
    auto panel = cli::load_panel(cli::default_panel_path());
    CHECK(panel.mu.size() == 3);
    CHECK(panel.points.size() >= 3);
    CHECK(cli::panel_cases(panel).size() >= 4);
}

TEST_CASE("CSV output") {
    auto e2 = run(std::vector<std::string>{"--format", "csv", "correlator", "--case", "zero", "--sweep-mu", ""});
    CHECK(e2.code == 0);
    CHECK(e2.out == "name,value_re,value_im,error,provenance\n");
    auto o = run("--format csv correlator --case zero --sweep-mu 0.5,1 --c 0 --method series");
    REQUIRE(o.code == 0);
    std::istringstream in(o.out);
    std::string header, l1, l2, l3;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    CHECK(header == "name,value_re,value_im,error,provenance,mu,c");
    CHECK(l1.rfind("series,", 0) == 0);
    CHECK(l2.rfind("series,", 0) == 0);
    CHECK(!std::getline(in, l3));
    Json report = {{"values", Json::array()}};
    CHECK(cli::to_csv(report) == "name,value_re,value_im,error,provenance\n");
}

TEST_CASE("identical inputs give byte-identical output") {
    const std::string line = "coeff --case one --alpha -0.2 --n 1 --oracle mc --samples 20000 --seed 7";
    auto a = run(line), b = run(line);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run("coeff --case one --alpha -0.2 --n 1 --oracle mc --samples 20000 --seed 8");
    CHECK(c.out != a.out);
    CHECK(run("--format csv " + line).out == run("--format csv " + line).out);
}

TEST_CASE("JSON output round-trips") {
    auto o = run("correlator --case one --alpha -0.3 --mu 1 --c 0.2 --method both");
    REQUIRE(o.code == 0);
    Json r = Json::parse(o.out);
    CHECK(Json::parse(r.dump(2)) == r);
    CHECK(r.dump(2) + "\n" == o.out);
    const Json* s = find_value(r, "series");
    const Json* k = find_value(r, "contour");
    REQUIRE(s);
    REQUIRE(k);
    Complex sv = cli::complex_from_json((*s)["value"]), kv = cli::complex_from_json((*k)["value"]);
    CHECK(std::abs(sv - kv) < 1e-8 * std::abs(sv));
    for (const auto& v : r["values"]) CHECK(v.contains("provenance"));
}

TEST_CASE("timing is opt-in") {
    auto a = run("specfn --fn gamma --z 0.5");
    CHECK(Json::parse(a.out).count("wall_time_s") == 0);
    auto b = run("--timing specfn --fn gamma --z 0.5");
    CHECK(Json::parse(b.out).count("wall_time_s") == 1);
}

TEST_CASE("--out writes the report to a file") {
    std::string path = temp_path("out.json");
    auto o = run("--out " + path + " specfn --fn barnes_g --z 4");
    CHECK(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream in(path);
    Json r = Json::parse(in);
    CHECK(cli::complex_from_json((*find_value(r, "barnes_g"))["value"]).real() == doctest::Approx(2.0));
    std::remove(path.c_str());
    CHECK(run("--out /nonexistent_dir/x.json specfn --fn gamma --z 1").code == 1);
}

TEST_CASE("registry reaches every public operation") {
    const std::set<std::string> api{
        "log_gamma", "gamma_power", "cgamma", "rgamma", "log_gamma_any", "digamma", "log_barnes_g", "barnes_g",
        "log_barnes_g_any", "hyp2f1", "hyp2f1_series", "plog", "ppow", "green_sphere", "disk_moment",
        "gamma_sum_identity", "coeff", "log_coeff", "oracle_coeff", "coulomb_integrand", "fit_growth_constant",
        "f_eval", "mellin_integrand", "series_correlator", "segment_series", "contour_correlator", "contour_line",
        "integrand_bound", "fit_integrand_bound", "check_contour_hypotheses", "regularized_correlator",
        "renormalization_exponent", "closed_form_limit", "renormalized_limit", "extrapolate_to_zero",
        "hankel_correlator", "hankel_factor", "vertical_segment", "vertical_segment_quadrature", "half_gaussian_moment",
        "two_point_pairing", "delta_target", "pairing_case", "heaviside_pairing", "heaviside_limit", "heaviside_bound",
        "ac_zero_point"};
    std::set<std::string> covered, invocations;
    for (const auto& e : cli::registry()) {
        covered.insert(e.operation);
        invocations.insert(e.invocation);
        CHECK(e.invocation.rfind(e.subcommand + " ", 0) == 0);
    }
    for (const auto& op : api) {
        INFO(op);
        CHECK(covered.count(op) == 1);
    }
    for (const auto& line : invocations) {
        INFO(line);
        auto o = run(line);
        CHECK(o.code != 2);
        CHECK(Json::accept(o.out));
    }
}
