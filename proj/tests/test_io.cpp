#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "h2r/mesh_io.hpp"
#include "h2r/report.hpp"

using namespace h2r;
namespace fs = std::filesystem;

TEST(Envelope, RoundTripAndDeterministicDump) {
    ResultEnvelope e;
    e.command = "gate";
    e.config = {{"pair", {{"top", 1.0}, {"bottom", -1.0}}}};
    e.results = to_json_report(obstruction_report({BoundaryCurve::constant(1.0), BoundaryCurve::constant(-1.0)}));
    e.timing = {{"seconds", 0.01}};
    const json j = e;
    EXPECT_EQ(j.at("version"), kVersion);
    const auto back = j.get<ResultEnvelope>();
    EXPECT_EQ(back, e);
    // same inputs, same bytes
    ResultEnvelope f = e;
    f.results = to_json_report(obstruction_report({BoundaryCurve::constant(1.0), BoundaryCurve::constant(-1.0)}));
    EXPECT_EQ(json(f).dump(2), j.dump(2));
    EXPECT_EQ(j.at("results").at("verdict"), "GatePassed");
}

TEST(Envelope, CurveForms) {
    EXPECT_DOUBLE_EQ(curve_from_json(json(0.7))(1.3), 0.7);
    const auto c = curve_from_json(json::parse(R"({"terms": [{"k": 0, "a": 1}, {"k": 2, "b": 0.5}]})"));
    EXPECT_NEAR(c(0.4), 1 + 0.5 * std::sin(0.8), 1e-15);
    const auto s = curve_from_json(json::parse(R"({"samples": [1, 2, 1, 0], "n": 4})"));
    EXPECT_NEAR(s(0.5 * std::numbers::pi), 2.0, 1e-14);
    EXPECT_THROW(curve_from_json(json::parse(R"({"samples": [1, 2], "n": 4})")), DomainError);
    EXPECT_THROW(curve_from_json(json::parse(R"({"x": 1})")), DomainError);
    EXPECT_THROW(pair_from_json(json::parse(R"({"top": 1})")), DomainError);
    const auto back = curve_from_json(curve_to_json(c));
    for (double t : {0.0, 1.0, 2.0}) EXPECT_DOUBLE_EQ(back(t), c(t));
}

TEST(Envelope, WitnessReport) {
    const Witness w{2.0, 5, 0.01, 1.001, 1e-12, 3.0, 1.0, 1.997};
    const auto j = to_json_report(w, 1e-13);
    EXPECT_EQ(j.at("n"), 5);
    EXPECT_DOUBLE_EQ(j.at("margin").get<double>(), w.margin());
}

TEST(Mesh, CatenoidRing) {
    const auto p = profile(1.0, 33);
    const auto m = catenoid_mesh(p, 24);
    EXPECT_EQ(m.vertices.size(), 33u * 24u);
    EXPECT_EQ(m.faces.size(), 2u * 32u * 24u);
    EXPECT_TRUE(m.valid_indices());
    // every interior edge is shared by exactly two faces; the two boundary circles once
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    int boundary = 0;
    for (const auto& [e, n] : edges) {
        EXPECT_LE(n, 2);
        if (n == 1) ++boundary;
    }
    EXPECT_EQ(boundary, 2 * 24);
    EXPECT_THROW(catenoid_mesh(p, 2), DomainError);
}

TEST(Mesh, TallRectangleHalvesMirror) {
    const TallRectParams prm(2.0);
    const int nr = 10, nth = 12;
    const auto m = tallrect_mesh(prm, 0.1, 10.0, nr, nth);
    EXPECT_EQ(m.vertices.size(), static_cast<std::size_t>((2 * nth - 1) * nr));
    EXPECT_TRUE(m.valid_indices());
    for (int i = 0; i < nth; ++i)
        for (int j = 0; j < nr; ++j) {
            const auto& up = m.vertices[i * nr + j];
            const auto& dn = m.vertices[(2 * nth - 2 - i) * nr + j];
            EXPECT_DOUBLE_EQ(up[2], -dn[2]);
            EXPECT_DOUBLE_EQ(up[0], dn[0]);
        }
    EXPECT_NEAR(m.vertices[0][2], lambda_profile(prm, 0.0), 1e-14);
    EXPECT_EQ(m.vertices[(nth - 1) * nr][2], 0.0);
    EXPECT_NEAR(m.vertices[nr - 1][0], 10.0, 1e-12);
    EXPECT_THROW(tallrect_mesh(prm, 1.0, 0.5), DomainError);
}

TEST(Mesh, WritersProduceReadableFiles) {
    const auto m = catenoid_mesh(profile(2.0, 17), 6);
    const auto dir = fs::temp_directory_path() / "h2r_test_io";
    fs::create_directories(dir);
    export_mesh(m, (dir / "c.obj").string());
    export_mesh(m, (dir / "c.ply").string());
    std::ifstream obj(dir / "c.obj");
    int v = 0, f = 0, maxidx = 0;
    for (std::string line; std::getline(obj, line);) {
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "v") ++v;
        if (tag == "f") {
            ++f;
            for (int k = 0, i; k < 3 && is >> i; ++k) {
                EXPECT_GE(i, 1);
                maxidx = std::max(maxidx, i);
            }
        }
    }
    EXPECT_EQ(v, static_cast<int>(m.vertices.size()));
    EXPECT_EQ(f, static_cast<int>(m.faces.size()));
    EXPECT_EQ(maxidx, v);
    std::ifstream ply(dir / "c.ply");
    std::string first;
    std::getline(ply, first);
    EXPECT_EQ(first, "ply");
    EXPECT_EQ(mesh_format_from_path("x.PLY"), MeshFormat::ply);
    EXPECT_EQ(mesh_format_from_path("x"), MeshFormat::obj);
    Mesh bad{{{0, 0, 0}}, {{0, 1, 2}}};
    EXPECT_THROW(export_mesh(bad, (dir / "bad.obj").string()), DomainError);
}

#ifdef H2R_CLI_PATH
namespace {
int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + H2R_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}
}  // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("catenoid --kappa 1"), 0);
    EXPECT_EQ(run_cli("no-such-command"), 1);
    EXPECT_EQ(run_cli("catenoid --kappa"), 1);
    EXPECT_EQ(run_cli("catenoid --kappa -1"), 1);  // rejected by the option validator
    EXPECT_EQ(run_cli("center --z0x 1.5"), 2);
    EXPECT_EQ(run_cli("gate --pair '{\"top\": 1}'"), 2);
    EXPECT_EQ(run_cli("gate --pair '{\"top\": '"), 1);
}

TEST(Cli, OutputDirectory) {
    const auto dir = fs::temp_directory_path() / "h2r_cli_out";
    fs::remove_all(dir);
    const std::string cmd = "H2R_OUTPUT_DIR=\"" + dir.string() + "\" \"" + H2R_CLI_PATH +
                            "\" catenoid --kappa 0.75 --out prof.csv --mesh cat.ply > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "prof.csv"));
    EXPECT_TRUE(fs::exists(dir / "cat.ply"));
    std::ifstream csv(dir / "prof.csv");
    bool neck = false;
    for (std::string line; std::getline(csv, line);) neck = neck || line.rfind("0,0.5,", 0) == 0;
    EXPECT_TRUE(neck);
}
#endif
