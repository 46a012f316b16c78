// test_io.cpp - config parsing, field files, manifests, determinism
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "ch6/config.hpp"
#include "ch6/field_io.hpp"
#include "ch6/run.hpp"

using namespace ch6;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"(# minimal valid config
[grid]
dim = 1
lengths = 1.0
modes = 16

[model]
sigma = 1.0
nu = 0.0
potential = quartic

[time]
T = 0.01
dt = 1e-3

[init]
phi0 = constant:0.5
)";

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "ch6_test_io";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("parse_config: defaults applied and recorded") {
    RunConfig cfg = parse_config_text(kMinimal);
    CHECK(cfg.stab_a == 2.0);
    CHECK(cfg.stab_b == 2.0);
    CHECK(cfg.dealias == false);
    CHECK(cfg.snapshot_stride == 10);
    CHECK(cfg.defaulted.count("time.stab_a") == 1);
    CHECK(cfg.defaulted.count("time.dealias") == 1);
    CHECK(cfg.defaulted.count("control.u") == 1);
    CHECK(cfg.defaulted.count("time.T") == 0);
    CHECK(cfg.lambda == 1.0); // quartic default
}

TEST_CASE("parse_config: constraint violations name the key") {
    auto expect_key = [](std::string text, const std::string& needle) {
        try {
            parse_config_text(std::move(text));
            FAIL_CHECK("expected rejection mentioning ", needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    std::string neg_sigma = kMinimal;
    neg_sigma.replace(neg_sigma.find("sigma = 1.0"), 11, "sigma = -1."), // reaction rate >= 0
        expect_key(neg_sigma, "model.sigma");

    expect_key(kMinimal + "\n[control]\nu_min = 2.0\nu_max = -2.0\n", "control.u_min");
    expect_key(kMinimal + "\n[control]\nalpha1 = -0.5\n", "control.alpha1");
    expect_key(kMinimal + "\n[junk]\nkey = 1\n", "junk.key");
    // re-opened section with a repeated key
    expect_key(kMinimal + "\n[time]\nT = 0.02\n", "time.T");
}

TEST_CASE("parse_config: syntax errors carry the line number") {
    try {
        parse_config_text("[grid]\ndim 1\n", "cfg.ini");
        FAIL_CHECK("expected syntax error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg.ini:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("parse_config: test-mode gating") {
    std::string lt = kMinimal;
    lt.replace(lt.find("potential = quartic"), 19, "potential = linear-test");
    CHECK_THROWS_AS(parse_config_text(lt), ConfigError);
    CHECK_NOTHROW(parse_config_text(lt + "\n[model]\ntest_mode = true\n"));

    std::string s0 = kMinimal;
    s0.replace(s0.find("sigma = 1.0"), 11, "sigma = 0.0");
    CHECK_THROWS_AS(parse_config_text(s0), ConfigError);
    CHECK_NOTHROW(parse_config_text(s0 + "\n[model]\ntest_mode = true\n"));
}

TEST_CASE("parse_config: T must divide into steps") {
    std::string bad = kMinimal;
    bad.replace(bad.find("T = 0.01"), 8, "T = 0.0105");
    CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
}

TEST_CASE("parse_config: polynomial potential with coefficient list") {
    std::string poly = kMinimal;
    poly.replace(poly.find("potential = quartic"), 19, "potential = polynomial");
    poly += "\n[model]\nlambda = 0.0\ncoefficients = 0 0 1 0 0.25\n";
    RunConfig cfg = parse_config_text(poly);
    ModelParams params = cfg.make_params();
    CHECK(params.potential.kind() == PotentialKind::polynomial);
    // F = s^2 + s^4/4, f = 2s + s^3
    CHECK(params.potential.f(1.0) == doctest::Approx(3.0).epsilon(1e-15));

    // a coefficient list violating the split is rejected when realized
    std::string bad = kMinimal;
    bad.replace(bad.find("potential = quartic"), 19, "potential = polynomial");
    bad += "\n[model]\nlambda = 0.0\ncoefficients = 0 1 0 0 0.25\n";
    CHECK_THROWS_AS(parse_config_text(bad).make_params(), Error);

    // polynomial kind without coefficients is caught at parse time
    std::string missing = kMinimal;
    missing.replace(missing.find("potential = quartic"), 19, "potential = polynomial");
    CHECK_THROWS_AS(parse_config_text(missing), ConfigError);
}

TEST_CASE("manifest: reparse reproduces the run configuration") {
    RunConfig cfg = parse_config_text(kMinimal);
    const std::string man = cfg.manifest();
    RunConfig again = parse_config_text(man);

    CHECK(again.dim == cfg.dim);
    CHECK(again.lengths == cfg.lengths);
    CHECK(again.modes == cfg.modes);
    CHECK(again.sigma == cfg.sigma);
    CHECK(again.dt == cfg.dt);
    CHECK(again.stab_a == cfg.stab_a);
    CHECK(again.phi0.render() == cfg.phi0.render());
    CHECK(again.u_min.render() == cfg.u_min.render());
    CHECK(again.taylor_eps == cfg.taylor_eps);
    // rendering is a fixpoint up to the default annotations
    auto strip = [](std::string s) {
        std::string needle = "  # default";
        for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle))
            s.erase(p, needle.size());
        return s;
    };
    CHECK(strip(again.manifest()) == strip(man));
}

TEST_CASE("field files: bit-exact roundtrip") {
    const fs::path dir = scratch_dir();
    const double lengths[] = {1.0, 2.0};
    const int modes[] = {6, 5};
    Grid g = Grid::make(2, lengths, modes);

    SpectralField f = random_smooth_field(g, 1.7, 21);
    const std::string spath = (dir / "f.ch6f").string();
    write_field(spath, f);
    CHECK(peek_field_kind(spath) == FieldFileKind::spectral);
    SpectralField back = read_spectral_field(spath);
    REQUIRE(back.grid() == g);
    for (std::size_t k = 0; k < f.size(); ++k)
        CHECK(back[k] == f[k]); // bit-exact

    GridField nod = to_nodal(f);
    const std::string npath = (dir / "n.ch6f").string();
    write_field(npath, nod);
    GridField nback = read_nodal_field(npath);
    for (std::size_t j = 0; j < nod.size(); ++j)
        CHECK(nback[j] == nod[j]);

    // kind mismatch is a typed error
    CHECK_THROWS_AS(read_nodal_field(spath), IoError);
    CHECK_THROWS_AS(read_spectral_field(npath), IoError);
}

TEST_CASE("field files: corrupt inputs") {
    const fs::path dir = scratch_dir();
    const double lengths[] = {1.0};
    const int modes[] = {8};
    Grid g = Grid::make(1, lengths, modes);
    const std::string path = (dir / "x.ch6f").string();
    write_field(path, SpectralField(g));

    // truncation
    std::string bytes = slurp(path);
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << bytes.substr(0, bytes.size() - 12);
    }
    try {
        read_spectral_field(path);
        FAIL_CHECK("expected truncation error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    }

    // magic mismatch
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        std::string wrong = bytes;
        wrong[0] = 'X';
        out << wrong;
    }
    CHECK_THROWS_AS(read_spectral_field(path), IoError);

    // unknown version
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        std::string wrong = bytes;
        wrong[4] = 9;
        out << wrong;
    }
    CHECK_THROWS_AS(read_spectral_field(path), IoError);

    CHECK_THROWS_AS(read_spectral_field((dir / "missing.ch6f").string()), IoError);
}

TEST_CASE("determinism: identical runs give identical CSV bytes and fields") {
    RunConfig cfg = parse_config_text(kMinimal);
    const Grid g = cfg.make_grid();

    auto run_once = [&]() {
        StateTrajectory traj = simulate(cfg.realize_phi0(g), cfg.realize_control(g),
                                        cfg.make_params(), cfg.make_stepper(), cfg.T);
        return run::diagnostics_csv(traj);
    };
    const std::string csv1 = run_once();
    const std::string csv2 = run_once();
    CHECK(csv1 == csv2);
    CHECK(csv1.find("t,mean,energy,nodal_max,energy_identity_residual") == 0);

    const fs::path dir = scratch_dir();
    SpectralField f = cfg.realize_phi0(g);
    write_field((dir / "a.ch6f").string(), f);
    write_field((dir / "b.ch6f").string(), f);
    CHECK(slurp(dir / "a.ch6f") == slurp(dir / "b.ch6f"));
}

TEST_CASE("field sources: realization") {
    RunConfig cfg = parse_config_text(kMinimal);
    Grid g = cfg.make_grid();

    FieldSource cs = FieldSource::parse("cosine:0.3,2", "k");
    SpectralField f = cs.realize_spectral(g);
    CHECK(f[2] == doctest::Approx(0.3 / std::sqrt(2.0)).epsilon(1e-14));

    FieldSource bad = FieldSource::parse("cosine:0.3,40", "k");
    CHECK_THROWS_AS(bad.realize_spectral(g), ConfigError);

    FieldSource none = FieldSource::parse("none", "k");
    CHECK_THROWS_AS(none.realize_spectral(g), ConfigError);

    CHECK_THROWS_AS(FieldSource::parse("wavelet:1", "k"), ConfigError);

    // constant source realizes nodally to the exact constant
    FieldSource c = FieldSource::parse("constant:0.25", "k");
    const GridField cn = c.realize_nodal(g);
    for (double v : cn.values())
        CHECK(v == 0.25);
}
