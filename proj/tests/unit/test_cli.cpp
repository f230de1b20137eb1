#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qfp/cli/commands.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = qfp::cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

// numeric rows of a CSV, comment lines and the column header skipped
std::vector<std::vector<double>> rows(const std::string& csv) {
    std::vector<std::vector<double>> r;
    std::istringstream is(csv);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> v;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
        r.push_back(v);
    }
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("params") {
    const auto r = call({"params"});
    CHECK(r.code == 0);
    CHECK(r.out.find("D=1.0000000000000000e+00") != std::string::npos);
    CHECK(r.out.find("lambdaT=5.0000000000000000e-01") != std::string::npos);
    CHECK(r.out.find("semiclassical_threshold=1.2500000000000000e-01") != std::string::npos);
    const auto c = call({"params", "--hbar", "0"});
    CHECK(c.out.find("classical regime") != std::string::npos);
    CHECK(c.out.find("semiclassical_threshold=0.0000000000000000e+00") != std::string::npos);
    const auto bad = call({"params", "--kT", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("kT") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"params", "--nope", "1"}).code == 2);
    CHECK(call({"params", "--m", "abc"}).code == 2);
    CHECK(call({"params", "--config", "/nonexistent/qf.cfg"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("dispersion table") {
    const auto r = call({"dispersion", "--laws", "classical", "--t_min", "0", "--t_max", "1", "--samples", "11"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.size() == 11);
    for (const auto& row : t) CHECK(row[1] == doctest::Approx(2 * row[0]).epsilon(1e-15));
    CHECK(r.out.rfind("# command=dispersion", 0) == 0);
    CHECK(r.out.find("# hbar=1") != std::string::npos);

    const auto o = call({"dispersion", "--laws", "eq13,lambert,classical", "--t_max", "3", "--samples", "31"});
    REQUIRE(o.code == 0);
    for (const auto& row : rows(o.out)) {
        CHECK(row[1] >= row[3]);
        CHECK(row[2] >= row[1] - 1e-12);
    }
}

TEST_CASE("eq9 below its validity time") {
    const auto r = call({"dispersion", "--laws", "eq9", "--t_min", "0", "--t_max", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("applicable for large times") != std::string::npos);
}

TEST_CASE("numerical failures exit with 3") {
    // a start state far narrower than the x spacing goes negative on the first interval
    const auto r = call({"kramers", "--nx", "16", "--np", "32", "--x_boundary", "periodic", "--x_half_width", "8",
                         "--sigma2_x0", "0.05", "--t1", "1", "--outputs", "1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("smoluchowski eq12 against eq13") {
    const auto r = call({"smoluchowski", "--variant", "eq12", "--comparison", "eq13"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(!t.empty());
    const auto& last = t.back();
    CHECK(std::abs(last[1] / last[4] - 1) < 0.02);
    for (const auto& row : t) CHECK(std::abs(row[2] - 1) < 1e-7);
}

TEST_CASE("kramers Maxwellization end to end") {
    const auto r = call({"kramers", "--hbar", "0", "--nx", "32", "--np", "48", "--x_boundary", "periodic",
                         "--x_half_width", "8", "--sigma2_x0", "1", "--sigma2_p0", "3", "--t1", "10", "--outputs", "2"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    CHECK(std::abs(t.back()[2] - 1) < 0.01);
    for (const auto& row : t) CHECK(std::abs(row[3] - 1) < 1e-7);
}

TEST_CASE("automodel header carries c2") {
    const auto r = call({"automodel", "--stride", "2000"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# c2_star=") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
    const auto dir = std::filesystem::temp_directory_path() / "qfokker_cli_test";
    std::filesystem::create_directories(dir);
    // same paths both times: the header records them
    const auto csv = (dir / "f.csv").string(), svg = (dir / "f.svg").string();
    std::string c[2], v[2];
    for (int k : {0, 1}) {
        REQUIRE(call({"figure1", "--s_max", "20", "--samples", "40", "--out", csv, "--svg", svg}).code == 0);
        c[k] = slurp(csv);
        v[k] = slurp(svg);
    }
    CHECK(c[0] == c[1]);
    CHECK(v[0] == v[1]);
    const auto& s = v[0];
    CHECK(s.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(s.find("stroke-dasharray") != std::string::npos);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
