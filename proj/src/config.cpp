#include "vch/config.hpp"

#include "vch/error.hpp"
#include "vch/expression.hpp"
#include "vch/snapshot.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace vch {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError("expected a number, got '" + v + "'");
    }
    return out;
}

long long to_integer(const std::string& v) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError("expected an integer, got '" + v + "'");
    }
    return out;
}

int to_int(const std::string& v) {
    const long long n = to_integer(v);
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
        throw ConfigError("integer out of range: '" + v + "'");
    }
    return static_cast<int>(n);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

template <class T, class Parse>
std::vector<T> to_list(const std::string& v, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse(trim(item)));
    if (out.empty()) throw ConfigError("expected a comma-separated list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Schema = std::map<std::string, std::map<std::string, Setter>>;

const Schema& schema() {
    static const Schema s = {
        {"physics",
         {
             {"potential",
              [](RunConfig& c, const std::string& v) {
                  if (v == "quartic") c.solver.physics.potential.kind = PotentialKind::quartic;
                  else if (v == "zero") c.solver.physics.potential.kind = PotentialKind::zero;
                  else throw ConfigError("expected quartic or zero, got '" + v + "'");
              }},
             {"gamma", [](RunConfig& c, const std::string& v) { c.solver.physics.potential.well.gamma = to_double(v); }},
             {"u_minus", [](RunConfig& c, const std::string& v) { c.solver.physics.potential.well.u_minus = to_double(v); }},
             {"u_plus", [](RunConfig& c, const std::string& v) { c.solver.physics.potential.well.u_plus = to_double(v); }},
             {"mobility",
              [](RunConfig& c, const std::string& v) {
                  if (v == "cutoff") c.solver.physics.mobility.kind = MobilityKind::cutoff;
                  else if (v == "degenerate") c.solver.physics.mobility.kind = MobilityKind::degenerate;
                  else if (v == "constant") c.solver.physics.mobility.kind = MobilityKind::constant;
                  else throw ConfigError("expected cutoff, degenerate or constant, got '" + v + "'");
              }},
             {"theta", [](RunConfig& c, const std::string& v) { c.solver.physics.mobility.theta = to_double(v); }},
             {"kappa", [](RunConfig& c, const std::string& v) { c.solver.kappa = to_double(v); }},
             {"alpha", [](RunConfig& c, const std::string& v) { c.solver.alpha = to_double(v); }},
         }},
        {"basis",
         {
             {"dim", [](RunConfig& c, const std::string& v) { c.solver.dim = to_int(v); }},
             {"modes", [](RunConfig& c, const std::string& v) { c.solver.modes = to_int(v); }},
             {"dealias", [](RunConfig& c, const std::string& v) { c.solver.dealias = to_bool(v); }},
             {"padding", [](RunConfig& c, const std::string& v) { c.solver.padding = to_double(v); }},
         }},
        {"time",
         {
             {"dt", [](RunConfig& c, const std::string& v) { c.solver.dt = to_double(v); }},
             {"t_end", [](RunConfig& c, const std::string& v) { c.solver.t_end = to_double(v); }},
             {"samples", [](RunConfig& c, const std::string& v) { c.samples = to_int(v); }},
         }},
        {"solver",
         {
             {"cg_tol", [](RunConfig& c, const std::string& v) { c.solver.cg_tol = to_double(v); }},
             {"cg_max_iter", [](RunConfig& c, const std::string& v) { c.solver.cg_max_iter = to_int(v); }},
             {"picard_tol", [](RunConfig& c, const std::string& v) { c.solver.picard_tol = to_double(v); }},
             {"picard_max", [](RunConfig& c, const std::string& v) { c.solver.picard_max = to_int(v); }},
             {"blowup_threshold", [](RunConfig& c, const std::string& v) { c.solver.blowup_threshold = to_double(v); }},
         }},
        {"initial",
         {
             {"u0", [](RunConfig& c, const std::string& v) { c.initial.expression = v; }},
             {"snapshot", [](RunConfig& c, const std::string& v) { c.initial.snapshot = v; }},
             {"noise", [](RunConfig& c, const std::string& v) { c.initial.noise = to_double(v); }},
             {"noise_modes", [](RunConfig& c, const std::string& v) { c.initial.noise_modes = to_int(v); }},
             {"seed",
              [](RunConfig& c, const std::string& v) {
                  const long long s = to_integer(v);
                  if (s < 0) throw ConfigError("seed must be non-negative");
                  c.initial.seed = static_cast<std::uint64_t>(s);
              }},
         }},
        {"sweep",
         {
             {"thetas", [](RunConfig& c, const std::string& v) { c.theta_list = to_list<double>(v, to_double); }},
             {"modes", [](RunConfig& c, const std::string& v) { c.n_list = to_list<int>(v, to_int); }},
             {"include_degenerate", [](RunConfig& c, const std::string& v) { c.include_degenerate = to_bool(v); }},
             {"eps_neg", [](RunConfig& c, const std::string& v) { c.eps_neg = to_double(v); }},
             {"nonzero_fraction", [](RunConfig& c, const std::string& v) { c.nonzero_fraction = to_double(v); }},
         }},
        {"output",
         {
             {"dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
             {"snapshot_every_sample", [](RunConfig& c, const std::string& v) { c.snapshot_every_sample = to_bool(v); }},
         }},
    };
    return s;
}

// Drops trailing comments and remembers the line of every key.
std::string strip_comments(std::string_view text, std::map<std::string, int>& key_lines) {
    std::string out;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (!t.empty() && t.front() == '[') {
            const auto close = t.find(']');
            if (close != std::string::npos) {
                section = trim(std::string_view(t).substr(1, close - 1));
                t = t.substr(0, close + 1);
            }
        } else if (!t.empty() && t.front() != ';' && t.front() != '#') {
            const auto c = t.find_first_of(";#");
            if (c != std::string::npos) t = trim(std::string_view(t).substr(0, c));
            const auto eq = t.find('=');
            if (eq != std::string::npos) key_lines[section + "." + trim(std::string_view(t).substr(0, eq))] = line_no;
        }
        out += t;
        out += '\n';
    }
    return out;
}

void constraint(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void validate_run_config(const RunConfig& c) {
    const auto& m = c.solver.physics.mobility;
    if (m.kind == MobilityKind::cutoff) {
        constraint(m.theta > 0.0 && m.theta < 1.0,
                   "physics.theta = " + std::to_string(m.theta) + " violates the cutoff mobility domain 0<θ<1");
    }
    constraint(m.kind != MobilityKind::constant || m.theta > 0.0, "physics.theta must be positive for constant mobility");
    constraint(c.solver.kappa > 0.0, "physics.kappa must be positive");
    constraint(c.solver.alpha > 0.0, "physics.alpha must be positive");
    if (c.solver.physics.potential.kind == PotentialKind::quartic) {
        constraint(c.solver.physics.potential.well.gamma > 0.0, "physics.gamma must be positive");
        constraint(c.solver.physics.potential.well.u_minus < c.solver.physics.potential.well.u_plus,
                   "physics.u_minus must be below physics.u_plus");
    }
    constraint(c.solver.dim == 1 || c.solver.dim == 2, "basis.dim must be 1 or 2");
    constraint(c.solver.modes >= 4 && c.solver.modes % 2 == 0, "basis.modes must be an even number >= 4");
    constraint(!c.solver.dealias || c.solver.padding >= 1.5, "basis.padding must be >= 1.5 when dealias is on");
    constraint(c.solver.dt > 0.0, "time.dt must be positive");
    constraint(c.solver.t_end > 0.0, "time.t_end must be positive");
    constraint(c.samples >= 1, "time.samples must be >= 1");
    try {
        step_count(c.solver);
    } catch (const PreconditionError&) {
        throw ConfigError("time.t_end must be a whole number of time.dt steps");
    }
    constraint(c.solver.cg_tol > 0.0 && c.solver.picard_tol > 0.0, "solver tolerances must be positive");
    constraint(c.solver.cg_max_iter >= 1 && c.solver.picard_max >= 1, "solver iteration caps must be >= 1");
    constraint(c.solver.blowup_threshold > 0.0, "solver.blowup_threshold must be positive");

    constraint(c.initial.expression.empty() != c.initial.snapshot.empty(),
               c.initial.expression.empty() ? "missing key initial.u0 (or initial.snapshot)"
                                            : "initial.u0 and initial.snapshot are mutually exclusive");
    constraint(c.initial.noise >= 0.0, "initial.noise must be non-negative");
    constraint(c.initial.noise_modes >= 1, "initial.noise_modes must be >= 1");

    for (std::size_t i = 0; i < c.theta_list.size(); ++i) {
        const double t = c.theta_list[i];
        constraint(t > 0.0 && t < 1.0, "sweep.thetas entry " + std::to_string(t) + " violates 0<θ<1");
        constraint(i == 0 || t < c.theta_list[i - 1], "sweep.thetas must be strictly decreasing");
    }
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        constraint(c.n_list[i] >= 4 && c.n_list[i] % 2 == 0, "sweep.modes entries must be even numbers >= 4");
        constraint(i == 0 || c.n_list[i] >= c.n_list[i - 1], "sweep.modes must be non-decreasing");
    }
    constraint(c.eps_neg >= 0.0, "sweep.eps_neg must be non-negative");
    constraint(c.nonzero_fraction >= 0.0 && c.nonzero_fraction <= 1.0, "sweep.nonzero_fraction must lie in [0, 1]");
    constraint(!c.output_dir.empty(), "output.dir must not be empty");
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides,
                            const std::string& origin) {
    std::map<std::string, int> key_lines;
    std::istringstream cleaned(strip_comments(text, key_lines));
    pt::ptree tree;
    try {
        pt::read_ini(cleaned, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw ConfigError("override '" + ov + "' is not of the form section.key=value");
        }
        const std::string section = trim(std::string_view(ov).substr(0, dot));
        const std::string key = trim(std::string_view(ov).substr(dot + 1, eq - dot - 1));
        tree.put(pt::ptree::path_type(section + "/" + key, '/'), trim(std::string_view(ov).substr(eq + 1)));
        key_lines[section + "." + key] = 0;
    }

    RunConfig cfg;
    const Schema& s = schema();
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) {
            throw ConfigError(origin + ":" + std::to_string(key_lines["." + section]) + ": key '" + section +
                              "' outside any section");
        }
        const auto sec = s.find(section);
        if (sec == s.end()) throw ConfigError(origin + ": unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            const std::string where = section + "." + key;
            const int line = key_lines.count(where) ? key_lines[where] : 0;
            const std::string loc = origin + (line > 0 ? ":" + std::to_string(line) : std::string(" (override)"));
            const auto setter = sec->second.find(key);
            if (setter == sec->second.end()) throw ConfigError(loc + ": unknown key " + where);
            if (!value.empty()) throw ConfigError(loc + ": key " + where + " has nested entries");
            try {
                setter->second(cfg, value.data());
            } catch (const ConfigError& e) {
                throw ConfigError(loc + ": " + where + ": " + e.what());
            }
        }
    }
    try {
        validate_run_config(cfg);
        if (!cfg.initial.expression.empty()) Expression::parse(cfg.initial.expression);
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = parse_config_text(ss.str(), overrides, path.string());
    if (!cfg.initial.snapshot.empty() && cfg.initial.snapshot.is_relative()) {
        cfg.initial.snapshot = path.parent_path() / cfg.initial.snapshot;
    }
    return cfg;
}

namespace {

// Uniform on [-1, 1) from the raw 64-bit stream, identical on every platform.
double symmetric_unit(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

// noise * sum over the half-plane of (a_k cos(k.x) + b_k sin(k.x)), |k_i| <= K.
// Modes are drawn in a fixed order independent of the target basis so that
// every resolution sees the same perturbation.
SpectralField noise_field(const InitialSpec& spec, const BasisPtr& basis) {
    SpectralField f(basis);
    std::mt19937_64 rng(spec.seed);
    const int K = spec.noise_modes;
    const int half = basis->modes() / 2;
    const double scale = spec.noise * 0.5 * std::pow(kTwoPi, 0.5 * basis->dim());
    auto draw = [&](int kx, int ky) {
        const double a = symmetric_unit(rng);
        const double b = symmetric_unit(rng);
        if (std::abs(kx) < half && ky < half) f.set_mode(kx, ky, scale * Complex(a, -b));
    };
    if (basis->dim() == 1) {
        for (int k = 1; k <= K; ++k) draw(k, 0);
    } else {
        for (int kx = 1; kx <= K; ++kx) draw(kx, 0);
        for (int ky = 1; ky <= K; ++ky) {
            for (int kx = -K; kx <= K; ++kx) draw(kx, ky);
        }
    }
    return f;
}

}  // namespace

InitialData make_initial_data(const InitialSpec& spec) {
    std::function<GridField(const BasisPtr&)> base;
    if (!spec.snapshot.empty()) {
        auto snap = std::make_shared<Snapshot>(read_snapshot(spec.snapshot));
        base = [snap](const BasisPtr& basis) {
            if (snap->field.basis()->dim() != basis->dim()) {
                throw ConfigError("initial snapshot dimension does not match basis.dim");
            }
            return to_grid(resample(snap->field, basis));
        };
    } else {
        const Expression expr = Expression::parse(spec.expression);
        base = [expr](const BasisPtr& basis) {
            return sample(basis, [&](double x, double y) { return expr(x, y); });
        };
    }
    if (spec.noise == 0.0) return base;
    return [base, spec](const BasisPtr& basis) {
        GridField u = base(basis);
        const GridField n = to_grid(noise_field(spec, basis));
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += n[i];
        return u;
    };
}

std::string describe(const InitialSpec& spec) {
    std::string d = spec.snapshot.empty() ? spec.expression : "snapshot:" + spec.snapshot.string();
    if (spec.noise != 0.0) {
        std::ostringstream ss;
        ss << d << " + noise(" << spec.noise << ", modes " << spec.noise_modes << ", seed " << spec.seed << ")";
        d = ss.str();
    }
    return d;
}

SweepPlan make_plan(const RunConfig& cfg) {
    SweepPlan plan;
    plan.base = cfg.solver;
    plan.theta_list = cfg.theta_list;
    plan.n_list = cfg.n_list;
    plan.u0 = make_initial_data(cfg.initial);
    plan.u0_description = describe(cfg.initial);
    plan.samples = cfg.samples;
    plan.include_degenerate = cfg.include_degenerate;
    plan.eps_neg = cfg.eps_neg;
    plan.nonzero_fraction = cfg.nonzero_fraction;
    return plan;
}

}  // namespace vch
