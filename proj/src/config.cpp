// config.cpp - INI parser, constraint validation, manifest rendering
#include "ch6/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ch6/field_io.hpp"

namespace ch6 {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ' ' || ch == '\t' || ch == ',') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'", key);
    }
}

long parse_int(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + s + "'", key);
    }
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ConfigError("not a boolean (true/false): '" + s + "'", key);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Raw key/value table with every known key accounted for.
struct RawConfig {
    std::map<std::string, std::string> kv; // "section.key" -> value
    std::string origin;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string take(const std::string& key) {
        auto it = kv.find(key);
        std::string v = it->second;
        kv.erase(it);
        return v;
    }
};

RawConfig lex(const std::string& text, const std::string& origin) {
    RawConfig raw;
    raw.origin = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value' (column " +
                              std::to_string(line.size() + 1) + ")");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                              "' outside any [section]");
        const std::string full = section + "." + key;
        if (raw.kv.count(full))
            throw ConfigError("duplicate key", full);
        raw.kv[full] = val;
    }
    return raw;
}

} // namespace

FieldSource FieldSource::parse(const std::string& text, const std::string& key) {
    FieldSource src;
    if (text == "none") {
        src.kind = Kind::none;
        return src;
    }
    if (text == "zero") {
        src.kind = Kind::zero;
        return src;
    }
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "constant") {
        src.kind = Kind::constant;
        src.value = parse_double(rest, key);
        return src;
    }
    if (head == "cosine") {
        src.kind = Kind::cosine;
        auto parts = split_list(rest);
        if (parts.size() < 2 || parts.size() > 4)
            throw ConfigError("cosine source needs amplitude and 1-3 mode indices", key);
        src.value = parse_double(parts[0], key);
        for (std::size_t i = 1; i < parts.size(); ++i)
            src.mode[i - 1] = static_cast<int>(parse_int(parts[i], key));
        return src;
    }
    if (head == "random") {
        src.kind = Kind::random;
        auto parts = split_list(rest);
        if (parts.size() != 2)
            throw ConfigError("random source needs amplitude and seed", key);
        src.value = parse_double(parts[0], key);
        src.seed = static_cast<std::uint64_t>(parse_int(parts[1], key));
        return src;
    }
    if (head == "file") {
        if (rest.empty())
            throw ConfigError("file source needs a path", key);
        src.kind = Kind::file;
        src.path = rest;
        return src;
    }
    throw ConfigError("unknown field source '" + text +
                          "' (want zero|constant:v|cosine:a,k|random:a,seed|file:path|none)",
                      key);
}

std::string FieldSource::render() const {
    switch (kind) {
    case Kind::none:
        return "none";
    case Kind::zero:
        return "zero";
    case Kind::constant:
        return "constant:" + fmt(value);
    case Kind::cosine: {
        std::string s = "cosine:" + fmt(value);
        s += "," + std::to_string(mode[0]);
        if (mode[1] != 0 || mode[2] != 0)
            s += "," + std::to_string(mode[1]);
        if (mode[2] != 0)
            s += "," + std::to_string(mode[2]);
        return s;
    }
    case Kind::random:
        return "random:" + fmt(value) + "," + std::to_string(seed);
    case Kind::file:
        return "file:" + path;
    }
    return "none";
}

SpectralField FieldSource::realize_spectral(const Grid& grid) const {
    switch (kind) {
    case Kind::none:
        throw ConfigError("field source required but set to none");
    case Kind::zero:
        return SpectralField(grid);
    case Kind::constant: {
        SpectralField f(grid);
        f[0] = value * std::sqrt(grid.volume());
        return f;
    }
    case Kind::cosine: {
        SpectralField f(grid);
        std::array<int, 3> multi{0, 0, 0};
        double scale = value;
        for (int a = 0; a < grid.dim(); ++a) {
            if (mode[a] < 0 || mode[a] >= grid.modes(a))
                throw ConfigError("cosine mode index out of range for the grid");
            multi[a] = mode[a];
            // basis_k has factor sqrt((k==0?1:2)/L); invert it
            scale *= std::sqrt(grid.length(a) / (mode[a] == 0 ? 1.0 : 2.0));
        }
        f[grid.flatten(multi)] = scale;
        return f;
    }
    case Kind::random:
        return random_smooth_field(grid, value, seed);
    case Kind::file: {
        if (peek_field_kind(path) == FieldFileKind::spectral) {
            SpectralField f = read_spectral_field(path);
            if (f.grid() != grid)
                throw ConfigError(path + ": field grid does not match the configured grid");
            return f;
        }
        GridField f = read_nodal_field(path);
        if (f.grid() != grid)
            throw ConfigError(path + ": field grid does not match the configured grid");
        return to_spectral(f);
    }
    }
    throw ConfigError("unhandled field source");
}

GridField FieldSource::realize_nodal(const Grid& grid) const {
    if (kind == Kind::constant) {
        GridField f(grid);
        for (std::size_t j = 0; j < f.size(); ++j)
            f[j] = value;
        return f;
    }
    if (kind == Kind::file && peek_field_kind(path) == FieldFileKind::nodal) {
        GridField f = read_nodal_field(path);
        if (f.grid() != grid)
            throw ConfigError(path + ": field grid does not match the configured grid");
        return f;
    }
    return to_nodal(realize_spectral(grid));
}

BoundSource BoundSource::parse(const std::string& text, const std::string& key) {
    BoundSource b;
    if (text.rfind("file:", 0) == 0) {
        b.is_file = true;
        b.path = text.substr(5);
        if (b.path.empty())
            throw ConfigError("file bound needs a path", key);
        return b;
    }
    b.value = parse_double(text, key);
    return b;
}

std::string BoundSource::render() const {
    return is_file ? "file:" + path : fmt(value);
}

namespace {

RunConfig build(RawConfig raw) {
    RunConfig cfg;
    auto required = [&raw](const std::string& key) {
        if (!raw.has(key))
            throw ConfigError("required key missing", key);
        return raw.take(key);
    };
    auto defaulted_d = [&raw, &cfg](const std::string& key, double dflt) {
        if (!raw.has(key)) {
            cfg.defaulted.insert(key);
            return dflt;
        }
        return parse_double(raw.take(key), key);
    };
    auto defaulted_i = [&raw, &cfg](const std::string& key, long dflt) {
        if (!raw.has(key)) {
            cfg.defaulted.insert(key);
            return dflt;
        }
        return parse_int(raw.take(key), key);
    };
    auto defaulted_b = [&raw, &cfg](const std::string& key, bool dflt) {
        if (!raw.has(key)) {
            cfg.defaulted.insert(key);
            return dflt;
        }
        return parse_bool(raw.take(key), key);
    };
    auto defaulted_s = [&raw, &cfg](const std::string& key, const std::string& dflt) {
        if (!raw.has(key)) {
            cfg.defaulted.insert(key);
            return dflt;
        }
        return raw.take(key);
    };

    // [grid]
    cfg.dim = static_cast<int>(parse_int(required("grid.dim"), "grid.dim"));
    if (cfg.dim < 1 || cfg.dim > 3)
        throw ConfigError("must be 1, 2 or 3", "grid.dim");
    for (const auto& s : split_list(required("grid.lengths")))
        cfg.lengths.push_back(parse_double(s, "grid.lengths"));
    for (const auto& s : split_list(required("grid.modes")))
        cfg.modes.push_back(static_cast<int>(parse_int(s, "grid.modes")));
    if (static_cast<int>(cfg.lengths.size()) != cfg.dim)
        throw ConfigError("need one length per axis", "grid.lengths");
    if (static_cast<int>(cfg.modes.size()) != cfg.dim)
        throw ConfigError("need one mode count per axis", "grid.modes");
    for (double l : cfg.lengths)
        if (!(l > 0.0))
            throw ConfigError("domain lengths must be > 0", "grid.lengths");
    for (int m : cfg.modes)
        if (m < 2)
            throw ConfigError("mode counts must be >= 2", "grid.modes");

    // [model]
    cfg.sigma = parse_double(required("model.sigma"), "model.sigma");
    cfg.nu = parse_double(required("model.nu"), "model.nu");
    cfg.potential_kind = required("model.potential");
    cfg.test_mode = defaulted_b("model.test_mode", false);
    if (cfg.potential_kind != "quartic" && cfg.potential_kind != "polynomial" &&
        cfg.potential_kind != "linear-test")
        throw ConfigError("unknown potential kind '" + cfg.potential_kind + "'",
                          "model.potential");
    const double lambda_default = cfg.potential_kind == "linear-test" ? 0.0 : 1.0;
    cfg.lambda = defaulted_d("model.lambda", lambda_default);
    if (raw.has("model.coefficients"))
        for (const auto& s : split_list(raw.take("model.coefficients")))
            cfg.coefficients.push_back(parse_double(s, "model.coefficients"));
    else
        cfg.defaulted.insert("model.coefficients");

    if (!(cfg.sigma >= 0.0))
        throw ConfigError("must be >= 0 (reaction-rate assumption)", "model.sigma");
    if (cfg.sigma == 0.0 && !cfg.test_mode)
        throw ConfigError("sigma = 0 violates the positivity assumption; "
                          "set model.test_mode = true to allow it",
                          "model.sigma");
    if (cfg.potential_kind == "linear-test" && !cfg.test_mode)
        throw ConfigError("linear-test potential is verification-only; "
                          "set model.test_mode = true to allow it",
                          "model.potential");
    if (!(cfg.lambda >= 0.0))
        throw ConfigError("must be >= 0 (convex-split parameter)", "model.lambda");
    if (cfg.potential_kind == "polynomial" && cfg.coefficients.empty())
        throw ConfigError("polynomial potential needs model.coefficients",
                          "model.coefficients");

    // [time]
    cfg.T = parse_double(required("time.T"), "time.T");
    cfg.dt = parse_double(required("time.dt"), "time.dt");
    cfg.stab_a = defaulted_d("time.stab_a", 2.0);
    cfg.stab_b = defaulted_d("time.stab_b", 2.0);
    cfg.dealias = defaulted_b("time.dealias", false);
    if (!(cfg.T > 0.0))
        throw ConfigError("must be > 0", "time.T");
    if (!(cfg.dt > 0.0))
        throw ConfigError("must be > 0", "time.dt");
    if (!(cfg.stab_a >= 0.0) || !(cfg.stab_b >= 0.0))
        throw ConfigError("stabilization coefficients must be >= 0", "time.stab_a");
    const double steps = cfg.T / cfg.dt;
    if (std::abs(steps - std::llround(steps)) > 1e-9 * steps)
        throw ConfigError("T must be an integer multiple of dt", "time.T");

    // [init]
    cfg.phi0 = FieldSource::parse(defaulted_s("init.phi0", "constant:0"), "init.phi0");

    // [control]
    cfg.u = FieldSource::parse(defaulted_s("control.u", "zero"), "control.u");
    cfg.alpha1 = defaulted_d("control.alpha1", 0.0);
    cfg.alpha2 = defaulted_d("control.alpha2", 0.0);
    cfg.alpha3 = defaulted_d("control.alpha3", 0.0);
    if (!(cfg.alpha1 >= 0.0) || !(cfg.alpha2 >= 0.0) || !(cfg.alpha3 >= 0.0))
        throw ConfigError("cost weights must be >= 0", "control.alpha1");
    cfg.u_min = BoundSource::parse(defaulted_s("control.u_min", "-1e300"), "control.u_min");
    cfg.u_max = BoundSource::parse(defaulted_s("control.u_max", "1e300"), "control.u_max");
    if (!cfg.u_min.is_file && !cfg.u_max.is_file && cfg.u_min.value > cfg.u_max.value)
        throw ConfigError("u_min must be <= u_max (admissible-set requirement)",
                          "control.u_min");
    cfg.phi_Q = FieldSource::parse(defaulted_s("control.phi_Q", "zero"), "control.phi_Q");
    cfg.phi_Omega =
        FieldSource::parse(defaulted_s("control.phi_Omega", "none"), "control.phi_Omega");

    // [optimize]
    cfg.max_iters = static_cast<int>(defaulted_i("optimize.max_iters", 100));
    cfg.step0 = defaulted_d("optimize.step0", 1.0);
    cfg.armijo_c1 = defaulted_d("optimize.armijo_c1", 1e-4);
    cfg.shrink = defaulted_d("optimize.shrink", 0.5);
    cfg.tol = defaulted_d("optimize.tol", 1e-4);
    cfg.gradcheck_directions = static_cast<int>(defaulted_i("optimize.gradcheck_directions", 5));
    cfg.gradcheck_eps = defaulted_d("optimize.gradcheck_eps", 1e-3);
    cfg.gradcheck_tol = defaulted_d("optimize.gradcheck_tol", 1e-2);
    if (raw.has("optimize.taylor_eps")) {
        cfg.taylor_eps.clear();
        for (const auto& s : split_list(raw.take("optimize.taylor_eps")))
            cfg.taylor_eps.push_back(parse_double(s, "optimize.taylor_eps"));
    } else {
        cfg.defaulted.insert("optimize.taylor_eps");
    }
    cfg.check_seed = static_cast<std::uint64_t>(defaulted_i("optimize.check_seed", 1234));
    if (cfg.max_iters < 0)
        throw ConfigError("must be >= 0", "optimize.max_iters");
    if (!(cfg.step0 > 0.0))
        throw ConfigError("must be > 0", "optimize.step0");
    if (!(cfg.armijo_c1 > 0.0) || !(cfg.armijo_c1 < 1.0))
        throw ConfigError("must be in (0,1)", "optimize.armijo_c1");
    if (!(cfg.shrink > 0.0) || !(cfg.shrink < 1.0))
        throw ConfigError("must be in (0,1)", "optimize.shrink");
    if (!(cfg.tol >= 0.0))
        throw ConfigError("must be >= 0", "optimize.tol");
    if (cfg.gradcheck_directions < 1)
        throw ConfigError("must be >= 1", "optimize.gradcheck_directions");
    if (!(cfg.gradcheck_eps > 0.0))
        throw ConfigError("must be > 0", "optimize.gradcheck_eps");
    for (double e : cfg.taylor_eps)
        if (!(e > 0.0))
            throw ConfigError("entries must be > 0", "optimize.taylor_eps");

    // [io]
    cfg.output_dir = defaulted_s("io.output_dir", "out");
    cfg.snapshot_stride = static_cast<int>(defaulted_i("io.snapshot_stride", 10));
    if (cfg.snapshot_stride < 1)
        throw ConfigError("must be >= 1", "io.snapshot_stride");

    if (!raw.kv.empty())
        throw ConfigError("unknown key", raw.kv.begin()->first);
    return cfg;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    return build(lex(text, origin));
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

Grid RunConfig::make_grid() const { return Grid::make(dim, lengths, modes); }

ModelParams RunConfig::make_params() const {
    ModelParams p;
    p.sigma = sigma;
    p.nu = nu;
    if (potential_kind == "quartic")
        p.potential = Potential::quartic(lambda);
    else if (potential_kind == "linear-test")
        p.potential = Potential::linear_test();
    else
        p.potential = Potential::polynomial(coefficients, lambda);
    return p;
}

StepperConfig RunConfig::make_stepper() const {
    StepperConfig c;
    c.dt = dt;
    c.stab_a = stab_a;
    c.stab_b = stab_b;
    c.dealias = dealias;
    return c;
}

OptimizeOptions RunConfig::make_optimize() const {
    OptimizeOptions o;
    o.max_iters = max_iters;
    o.step0 = step0;
    o.armijo_c1 = armijo_c1;
    o.shrink = shrink;
    o.tol = tol;
    return o;
}

BoxConstraints RunConfig::make_box(const Grid& grid) const {
    auto bound = [&grid](const BoundSource& b) -> BoxConstraints::Bound {
        if (!b.is_file)
            return b.value;
        GridField f = read_nodal_field(b.path);
        if (f.grid() != grid)
            throw ConfigError(b.path + ": bound field grid does not match the configured grid");
        return f;
    };
    BoxConstraints box(bound(u_min), bound(u_max));
    box.validate(grid);
    return box;
}

CostConfig RunConfig::make_cost(const Grid& grid, int /*steps*/) const {
    CostConfig c;
    c.alpha1 = alpha1;
    c.alpha2 = alpha2;
    c.alpha3 = alpha3;
    if (phi_Q.kind != FieldSource::Kind::none && phi_Q.kind != FieldSource::Kind::zero)
        c.phi_Q = TargetSchedule::constant(phi_Q.realize_spectral(grid));
    if (phi_Omega.kind != FieldSource::Kind::none)
        c.phi_Omega = phi_Omega.realize_spectral(grid);
    return c;
}

SpectralField RunConfig::realize_phi0(const Grid& grid) const {
    return phi0.realize_spectral(grid);
}

ControlSchedule RunConfig::realize_control(const Grid& grid) const {
    return ControlSchedule::constant(u.realize_nodal(grid));
}

std::string RunConfig::manifest() const {
    std::ostringstream out;
    auto mark = [this](const std::string& key) {
        return defaulted.count(key) ? "  # default" : "";
    };
    out << "# run manifest: fully resolved configuration\n";
    out << "[grid]\n";
    out << "dim = " << dim << "\n";
    out << "lengths =";
    for (double l : lengths)
        out << " " << fmt(l);
    out << "\nmodes =";
    for (int m : modes)
        out << " " << m;
    out << "\n\n[model]\n";
    out << "sigma = " << fmt(sigma) << "\n";
    out << "nu = " << fmt(nu) << "\n";
    out << "potential = " << potential_kind << "\n";
    out << "lambda = " << fmt(lambda) << mark("model.lambda") << "\n";
    if (!coefficients.empty()) {
        out << "coefficients =";
        for (double c : coefficients)
            out << " " << fmt(c);
        out << "\n";
    }
    out << "test_mode = " << (test_mode ? "true" : "false") << mark("model.test_mode") << "\n";
    out << "\n[time]\n";
    out << "T = " << fmt(T) << "\n";
    out << "dt = " << fmt(dt) << "\n";
    out << "stab_a = " << fmt(stab_a) << mark("time.stab_a") << "\n";
    out << "stab_b = " << fmt(stab_b) << mark("time.stab_b") << "\n";
    out << "dealias = " << (dealias ? "true" : "false") << mark("time.dealias") << "\n";
    out << "\n[init]\n";
    out << "phi0 = " << phi0.render() << mark("init.phi0") << "\n";
    out << "\n[control]\n";
    out << "u = " << u.render() << mark("control.u") << "\n";
    out << "alpha1 = " << fmt(alpha1) << mark("control.alpha1") << "\n";
    out << "alpha2 = " << fmt(alpha2) << mark("control.alpha2") << "\n";
    out << "alpha3 = " << fmt(alpha3) << mark("control.alpha3") << "\n";
    out << "u_min = " << u_min.render() << mark("control.u_min") << "\n";
    out << "u_max = " << u_max.render() << mark("control.u_max") << "\n";
    out << "phi_Q = " << phi_Q.render() << mark("control.phi_Q") << "\n";
    out << "phi_Omega = " << phi_Omega.render() << mark("control.phi_Omega") << "\n";
    out << "\n[optimize]\n";
    out << "max_iters = " << max_iters << mark("optimize.max_iters") << "\n";
    out << "step0 = " << fmt(step0) << mark("optimize.step0") << "\n";
    out << "armijo_c1 = " << fmt(armijo_c1) << mark("optimize.armijo_c1") << "\n";
    out << "shrink = " << fmt(shrink) << mark("optimize.shrink") << "\n";
    out << "tol = " << fmt(tol) << mark("optimize.tol") << "\n";
    out << "gradcheck_directions = " << gradcheck_directions
        << mark("optimize.gradcheck_directions") << "\n";
    out << "gradcheck_eps = " << fmt(gradcheck_eps) << mark("optimize.gradcheck_eps") << "\n";
    out << "gradcheck_tol = " << fmt(gradcheck_tol) << mark("optimize.gradcheck_tol") << "\n";
    out << "taylor_eps =";
    for (double e : taylor_eps)
        out << " " << fmt(e);
    out << mark("optimize.taylor_eps") << "\n";
    out << "check_seed = " << check_seed << mark("optimize.check_seed") << "\n";
    out << "\n[io]\n";
    out << "output_dir = " << output_dir << mark("io.output_dir") << "\n";
    out << "snapshot_stride = " << snapshot_stride << mark("io.snapshot_stride") << "\n";
    return out.str();
}

} // namespace ch6
