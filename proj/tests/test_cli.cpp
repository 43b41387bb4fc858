#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abreu/io.hpp"

using namespace abreu;

namespace {

std::string g_binary;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "cli_out.tmp";
    std::string cmd = g_binary + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}

TEST_CASE("examples emit parseable fixtures; parse-emit round trip") {
    for (std::string name : {"square", "simplex", "hirzebruch", "rectangle"}) {
        auto r = run_cli("examples " + name);
        REQUIRE(r.exit_code == 0);
        auto j = OrderedJson::parse(r.out);
        auto pp = parse_polytope_json(j, name);
        // canonical round trip: emit(parse(emit(parse(file)))) is stable
        auto j1 = emit_polytope(pp.polytope, pp.reference_labels ? &*pp.reference_labels : nullptr);
        auto pp2 = parse_polytope_json(j1, name + "-rt");
        auto j2 =
            emit_polytope(pp2.polytope, pp2.reference_labels ? &*pp2.reference_labels : nullptr);
        CHECK(j1.dump() == j2.dump());
    }
}

TEST_CASE("extremal on the square fixture") {
    run_cli("examples square --output square.json");
    auto r = run_cli("extremal --input square.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(j["A0"].get<double>() == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(j["constant"].get<bool>());
}

TEST_CASE("normalize on the hirzebruch fixture") {
    run_cli("examples hirzebruch --output hz.json");
    auto r = run_cli("normalize --input hz.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(j["preferred_point"][0].get<double>() == doctest::Approx(14.0 / 9).epsilon(1e-10));
    CHECK(j["preferred_point"][1].get<double>() == doctest::Approx(7.0 / 9).epsilon(1e-10));
    CHECK(j["common_value"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    // labels proportional to (9/7) nu(C=1): first normal (9/5, 0)
    CHECK(j["labels"][0]["normal"][0].get<double>() == doctest::Approx(9.0 / 5).epsilon(1e-10));
    CHECK(j["extremal_A0"].get<double>() == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("angles table on the hirzebruch fixture") {
    run_cli("examples hirzebruch --output hz.json");
    auto r = run_cli("angles --input hz.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(j["facets"][0]["ratio_exact"].get<std::string>() == "5/7");
    CHECK(j["facets"][0]["class"].get<std::string>() == "conical");
    CHECK(j["facets"][0]["angle_str"].get<std::string>() == "2*pi*5/7");
    CHECK(j["facets"][1]["ratio_exact"].get<std::string>() == "4/7");
    CHECK(j["facets"][2]["class"].get<std::string>() == "smooth");
    CHECK(j["facets"][3]["class"].get<std::string>() == "smooth");

    auto t = run_cli("angles --input hz.json");
    CHECK(t.out.find("5/7") != std::string::npos);
}

TEST_CASE("rationality and delzant") {
    run_cli("examples hirzebruch --output hz.json");
    auto r = run_cli("rationality --input hz.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(j["minimal_scale"].get<std::string>() == "20");
    CHECK(j["is_lattice_polytope"].get<bool>());

    // the reference labels are Delzant; check via a file that uses eta as facets
    OrderedJson hzj = OrderedJson::parse(run_cli("examples hirzebruch").out);
    OrderedJson eta;
    eta["dim"] = 2;
    eta["facets"] = hzj["reference_labels"];
    write_file("eta.json", eta.dump());
    auto d = run_cli("delzant --input eta.json --json");
    REQUIRE(d.exit_code == 0);
    auto dj = OrderedJson::parse(d.out);
    CHECK(dj["delzant"].get<bool>());
}

TEST_CASE("validation errors map to exit code 2") {
    write_file("bad.json", R"({"dim": 2, "facets": [
        {"normal": [1, 0], "offset": 1},
        {"normal": [0, 1], "offset": 1},
        {"normal": [1, 1], "offset": 1}]})");
    auto r = run_cli("info --input bad.json");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("Unbounded") != std::string::npos);

    write_file("broken.json", "{ not json");
    auto r2 = run_cli("info --input broken.json");
    CHECK(r2.exit_code == 2);

    auto r3 = run_cli("info --input does_not_exist.json");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("soliton and info on fixtures") {
    run_cli("examples simplex --output sx.json");
    auto r = run_cli("soliton --input sx.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(std::abs(j["a"][0].get<double>()) <= 1e-8);
    CHECK(std::abs(j["a"][1].get<double>()) <= 1e-8);

    auto i = run_cli("info --input sx.json --json");
    auto ij = OrderedJson::parse(i.out);
    CHECK(ij["monotone"].get<bool>());
    CHECK(ij["volume"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("deterministic reports") {
    run_cli("examples hirzebruch --output hz.json");
    auto a = run_cli("extremal --input hz.json --json");
    auto b = run_cli("extremal --input hz.json --json");
    CHECK(a.out == b.out);
}

TEST_CASE("golden reports on the fixtures") {
    const char* golden_dir = std::getenv("ABREU_GOLDEN_DIR");
    std::string dir = golden_dir ? golden_dir : "../../tests/golden";
    struct Entry {
        const char* fixture;
        const char* command;
        const char* file;
    };
    const Entry entries[] = {
        {"square", "extremal", "square_extremal.json"},
        {"square", "moments", "square_moments.json"},
        {"hirzebruch", "normalize", "hirzebruch_normalize.json"},
        {"hirzebruch", "angles", "hirzebruch_angles.json"},
        {"hirzebruch", "rationality", "hirzebruch_rationality.json"},
        {"simplex", "extremal", "simplex_extremal.json"},
        {"rectangle", "info", "rectangle_info.json"},
    };
    for (const auto& e : entries) {
        std::string input = std::string(e.fixture) + "_fixture.json";
        run_cli(std::string("examples ") + e.fixture + " --output " + input);
        auto r = run_cli(std::string(e.command) + " --input " + input + " --json");
        std::ifstream g(dir + "/" + e.file);
        REQUIRE_MESSAGE(g.good(), "missing golden file " << e.file);
        std::stringstream ss;
        ss << g.rdbuf();
        // normalize the input path; everything else must byte-match
        auto actual = OrderedJson::parse(r.out);
        auto expected = OrderedJson::parse(ss.str());
        actual["input"] = "FIXTURE";
        expected["input"] = "FIXTURE";
        CHECK_MESSAGE(actual.dump(2) == expected.dump(2), e.file << " drifted");
        CHECK(actual["schema_version"].get<int>() == 1);
    }
}

TEST_CASE("solve smoke and non-convergence exit code") {
    run_cli("examples square --output square.json");
    auto ok = run_cli("solve --input square.json --resolution 8 --json");
    REQUIRE(ok.exit_code == 0);
    auto j = OrderedJson::parse(ok.out);
    CHECK(j["deviation"].get<double>() <= 1e-8);

    // an unreachable tolerance must surface exit code 3
    auto bad = run_cli("solve --input square.json --resolution 8 --tol 1e-18");
    CHECK(bad.exit_code == 3);
}

TEST_CASE("check-potential on the square (guillemin)") {
    run_cli("examples square --output square.json");
    auto r = run_cli("check-potential --input square.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = OrderedJson::parse(r.out);
    CHECK(j["boundary_check"]["pass"].get<bool>());
    CHECK(j["abreu_scalar"]["mean"].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(j["einstein_residual"]["deviation"].get<double>() <= 1e-10);
}
