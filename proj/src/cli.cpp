#include "kgo/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgo/error.hpp"
#include "kgo/heun.hpp"
#include "kgo/wavefunction.hpp"

namespace kgo::cli {

namespace {

constexpr std::string_view known_keys[] = {
    // scenario
    "kind", "alpha", "mass", "omega_osc", "A", "B", "xi", "kc", "l", "k", "n",
    // solver
    "e_min", "e_max", "grid_points", "tol", "max_iter",
    // oracle
    "fd_points", "x_max",
    // output
    "format", "out",
    // command specific
    "free", "guess_e", "guess_p", "free_min", "free_max", "free_steps", "samples", "branch",
    "param", "from", "to", "steps", "levels",
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<std::string> lookup(const KeyValues& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end()) {
        return std::nullopt;
    }
    return it->second;
}

double required_double(const KeyValues& kv, const std::string& key)
{
    const auto v = lookup(kv, key);
    if (!v) {
        throw ConfigError("missing required key '" + key + "'");
    }
    return parse_double(key, *v);
}

double optional_double(const KeyValues& kv, const std::string& key, double fallback)
{
    const auto v = lookup(kv, key);
    return v ? parse_double(key, *v) : fallback;
}

int optional_int(const KeyValues& kv, const std::string& key, int fallback)
{
    const auto v = lookup(kv, key);
    return v ? parse_int(key, *v) : fallback;
}

std::string flag_name(std::string_view key)
{
    std::string name(key);
    std::replace(name.begin(), name.end(), '_', '-');
    return name;
}

} // namespace

bool is_known_key(std::string_view key)
{
    return std::find(std::begin(known_keys), std::end(known_keys), key) != std::end(known_keys);
}

KeyValues parse_config_text(std::string_view text)
{
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!is_known_key(key)) {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        kv[key] = value;
    }
    return kv;
}

double parse_double(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc{} || ptr != last) {
        throw ConfigError("key '" + std::string(key) + "': not a number: '" + s + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("key '" + std::string(key) + "': not an integer: '" + s + "'");
    }
    return v;
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "NaN";
    }
    if (std::isinf(v)) {
        return v > 0.0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

RunConfig RunConfig::from(const KeyValues& kv)
{
    RunConfig rc;
    Scenario& sc = rc.scenario;
    const auto kind = lookup(kv, "kind");
    if (!kind) {
        throw ConfigError("missing required key 'kind'");
    }
    if (*kind == "cornell") {
        sc.kind = ScenarioKind::cornell;
    } else if (*kind == "pdm") {
        sc.kind = ScenarioKind::pdm_linear;
    } else {
        throw ConfigError("key 'kind': expected 'cornell' or 'pdm', got '" + *kind + "'");
    }
    sc.spacetime.alpha = optional_double(kv, "alpha", 0.0);
    sc.particle.mass = required_double(kv, "mass");
    sc.particle.omega_osc = required_double(kv, "omega_osc");
    if (sc.kind == ScenarioKind::cornell) {
        sc.cornell.a_lin = optional_double(kv, "A", 0.0);
        sc.cornell.b_coul = optional_double(kv, "B", 0.0);
    } else {
        sc.linear.xi = required_double(kv, "xi");
        sc.pdm.kc = optional_double(kv, "kc", 0.0);
    }
    sc.qn.l = optional_double(kv, "l", 0.0);
    sc.qn.k = optional_double(kv, "k", 0.0);
    sc.qn.n = optional_int(kv, "n", 0);
    try {
        sc.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    rc.solve = default_config(sc);
    rc.solve.e_min = optional_double(kv, "e_min", rc.solve.e_min);
    rc.solve.e_max = optional_double(kv, "e_max", rc.solve.e_max);
    rc.solve.grid_points = optional_int(kv, "grid_points", rc.solve.grid_points);
    rc.solve.tol = optional_double(kv, "tol", rc.solve.tol);
    rc.solve.max_iter = optional_int(kv, "max_iter", rc.solve.max_iter);
    if (const auto v = lookup(kv, "free_min")) rc.solve.free_min = parse_double("free_min", *v);
    if (const auto v = lookup(kv, "free_max")) rc.solve.free_max = parse_double("free_max", *v);
    rc.solve.free_steps = optional_int(kv, "free_steps", rc.solve.free_steps);
    try {
        rc.solve.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    rc.fd_points = optional_int(kv, "fd_points", rc.fd_points);
    if (rc.fd_points < 100) {
        throw ConfigError("key 'fd_points' must be >= 100");
    }
    if (const auto v = lookup(kv, "x_max")) {
        rc.x_max = parse_double("x_max", *v);
        if (!(*rc.x_max > 0.0)) {
            throw ConfigError("key 'x_max' must be > 0");
        }
    }
    rc.format = lookup(kv, "format").value_or("csv");
    if (rc.format != "csv" && rc.format != "json") {
        throw ConfigError("key 'format': expected 'csv' or 'json'");
    }
    rc.out_path = lookup(kv, "out").value_or("");
    return rc;
}

void write_csv(std::ostream& os, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "");
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        os << format_double(v);
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t)
{
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        nlohmann::ordered_json col = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) {
                            col.push_back(v);
                        } else {
                            col.push_back(nullptr);
                        }
                    } else {
                        col.push_back(v);
                    }
                },
                row[c]);
        }
        obj[t.columns[c]] = std::move(col);
    }
    os << obj.dump(2) << '\n';
}

namespace {

void emit(const RunConfig& rc, std::ostream& out, const Table& t)
{
    std::ofstream file;
    std::ostream* os = &out;
    if (!rc.out_path.empty()) {
        file.open(rc.out_path);
        if (!file) {
            throw ConfigError("cannot open output file '" + rc.out_path + "'");
        }
        os = &file;
    }
    const auto old_flags = os->flags();
    if (rc.format == "json") {
        write_json(*os, t);
    } else {
        write_csv(*os, t);
    }
    os->flags(old_flags);
}

Branch requested_branch(const KeyValues& kv)
{
    const std::string b = lookup(kv, "branch").value_or("positive");
    if (b == "positive" || b == "+") return Branch::positive;
    if (b == "negative" || b == "-") return Branch::negative;
    throw ConfigError("key 'branch': expected 'positive' or 'negative'");
}

// Root of the requested sign nearest to zero energy.
std::optional<BoundState> lowest_on_branch(const std::vector<BoundState>& roots, Branch branch)
{
    std::optional<BoundState> best;
    for (const auto& r : roots) {
        if (r.branch() == branch && (!best || std::abs(r.energy) < std::abs(best->energy))) {
            best = r;
        }
    }
    return best;
}

BoundState solve_joint_from(const RunConfig& rc, const KeyValues& kv)
{
    const Param free = param_from_string(lookup(kv, "free").value_or("omega_osc"));
    const Branch branch = requested_branch(kv);
    const double guess_p = optional_double(kv, "guess_p", get(rc.scenario, free));
    double guess_e;
    if (const auto v = lookup(kv, "guess_e")) {
        guess_e = parse_double("guess_e", *v);
    } else {
        std::optional<BoundState> first;
        try {
            first = lowest_on_branch(solve_energy(with(rc.scenario, free, guess_p), rc.solve), branch);
        } catch (const Error&) {
        }
        guess_e = first ? first->energy : (branch == Branch::positive ? 1.0 : -1.0);
    }
    return solve_joint(rc.scenario, free, rc.solve, {guess_e, guess_p});
}

BoundState select_state(const RunConfig& rc, const KeyValues& kv)
{
    if (lookup(kv, "free")) {
        return solve_joint_from(rc, kv);
    }
    const Branch branch = requested_branch(kv);
    const auto state = lowest_on_branch(solve_energy(rc.scenario, rc.solve), branch);
    if (!state) {
        throw Error(Errc::no_root_found, "no root on the " + std::string(to_string(branch)) + " branch");
    }
    return *state;
}

int cmd_spectrum(const RunConfig& rc, std::ostream& out)
{
    Table t{{"n", "E", "residual_energy", "residual_coeff", "branch"}, {}};
    for (const auto& bs : solve_energy(rc.scenario, rc.solve)) {
        t.rows.push_back({static_cast<long long>(bs.n), bs.energy, bs.residual_energy, bs.residual_coeff,
                          std::string(to_string(bs.branch()))});
    }
    emit(rc, out, t);
    return exit_ok;
}

int cmd_joint(const RunConfig& rc, const KeyValues& kv, std::ostream& out)
{
    const BoundState bs = solve_joint_from(rc, kv);
    Table t{{"n", "E", "free", "free_value", "residual_energy", "residual_coeff", "branch"}, {}};
    t.rows.push_back({static_cast<long long>(bs.n), bs.energy, std::string(to_string(bs.free_param->name)),
                      bs.free_param->value, bs.residual_energy, bs.residual_coeff,
                      std::string(to_string(bs.branch()))});
    emit(rc, out, t);
    return exit_ok;
}

int cmd_wavefunction(const RunConfig& rc, const KeyValues& kv, std::ostream& out, std::ostream& err)
{
    const int samples = optional_int(kv, "samples", default_samples);
    if (samples < min_samples) {
        throw ConfigError("key 'samples' must be >= " + std::to_string(min_samples));
    }
    const BoundState bs = select_state(rc, kv);
    const double x_max = rc.x_max.value_or(default_x_max(bs));
    const WaveTable wt = normalize(assemble(bs, rc.scenario, x_max, samples));
    Table t{{"x", "psi"}, {}};
    t.rows.reserve(wt.xs.size());
    for (std::size_t i = 0; i < wt.xs.size(); ++i) {
        t.rows.push_back({wt.xs[i], wt.psi[i]});
    }
    emit(rc, out, t);
    err << "E=" << format_double(bs.energy) << " nodes=" << wt.nodes << " norm=" << format_double(wt.norm)
        << '\n';
    return exit_ok;
}

int cmd_verify(const RunConfig& rc, const KeyValues& kv, std::ostream& out)
{
    const BoundState bs = select_state(rc, kv);
    const Scenario sc = resolved(rc.scenario, bs);
    GridSpec grid = default_grid(sc, bs.energy, rc.fd_points);
    if (rc.x_max) {
        grid.x_max = *rc.x_max;
    }
    const OracleResult res = verify(bs, sc, grid);
    const bool pass = res.relative_mismatch() <= 1e-3 && res.overlap >= 0.999;
    Table t{{"E", "eig_index", "eigenvalue", "beta0", "mismatch", "relative_mismatch", "overlap", "pass"}, {}};
    t.rows.push_back({res.energy, static_cast<long long>(res.eig_index), res.eigenvalue, res.beta0, res.mismatch,
                      res.relative_mismatch(), res.overlap, static_cast<long long>(pass)});
    emit(rc, out, t);
    return pass ? exit_ok : exit_verification;
}

int cmd_scan(const RunConfig& rc, const KeyValues& kv, std::ostream& out)
{
    const auto param_name = lookup(kv, "param");
    if (!param_name) {
        throw ConfigError("missing required key 'param'");
    }
    const Param param = param_from_string(*param_name);
    const double from = required_double(kv, "from");
    const double to = required_double(kv, "to");
    const int steps = optional_int(kv, "steps", 0);
    if (steps < 1) {
        throw ConfigError("key 'steps' must be >= 1");
    }
    std::vector<double> values;
    for (int i = 0; i < steps; ++i) {
        values.push_back(steps == 1 ? from : from + (to - from) * static_cast<double>(i) / (steps - 1));
    }
    std::vector<int> levels;
    if (const auto lv = lookup(kv, "levels")) {
        std::string item;
        std::istringstream in(*lv);
        while (std::getline(in, item, ',')) {
            levels.push_back(parse_int("levels", item));
        }
    } else {
        levels.push_back(rc.scenario.qn.n);
    }
    Table t{{"param", "n", "E", "residual_coeff"}, {}};
    for (const auto& row : scan(rc.scenario, param, values, levels)) {
        if (row.roots.empty()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            t.rows.push_back({row.value, static_cast<long long>(row.n), nan, nan});
        }
        for (const auto& bs : row.roots) {
            t.rows.push_back({row.value, static_cast<long long>(row.n), bs.energy, bs.residual_coeff});
        }
    }
    emit(rc, out, t);
    return exit_ok;
}

int cmd_selftest(std::ostream& out)
{
    int failures = 0;
    const auto check = [&](const char* name, bool ok) {
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    };

    Scenario pdm;
    pdm.kind = ScenarioKind::pdm_linear;
    pdm.particle = {1.0, 1.0};
    pdm.linear = {1.0};
    {
        const auto roots = solve_energy(pdm, default_config(pdm));
        bool ok = roots.size() == 2;
        for (const auto& r : roots) {
            ok = ok && std::abs(std::abs(r.energy) - std::sqrt(5.0)) <= 1e-10;
        }
        check("minkowski closed form E = sqrt(5)", ok);
    }

    Scenario cornell;
    cornell.kind = ScenarioKind::cornell;
    cornell.spacetime.alpha = 1.0;
    cornell.particle = {1.0, 1.0};
    cornell.cornell = {1.0, 0.0};
    const double worked = std::sqrt(0.5 * (13.0 + std::sqrt(189.0)));
    std::optional<BoundState> state;
    {
        state = lowest_on_branch(solve_energy(cornell, default_config(cornell)), Branch::positive);
        check("vorticity root E^2 = (13 + sqrt 189) / 2", state && std::abs(state->energy - worked) <= 1e-10);
    }
    {
        const auto bs = continuant_roots(1.5, 0.7, 3);
        bool ok = bs.size() == 4;
        for (double b : bs) {
            const HeunParams hp{1.5, b, 1.5 + 2.0 + 6.0, 0.7};
            const HeunSeries hs = series_coefficients(hp, 16);
            ok = ok && hs.truncated_at && *hs.truncated_at == 3;
        }
        check("continuant roots terminate the series", ok);
    }
    if (state) {
        const OracleResult res = verify(*state, cornell);
        check("finite-difference oracle agreement", res.relative_mismatch() <= 1e-3 && res.overlap >= 0.999);
    }
    return failures == 0 ? exit_ok : exit_verification;
}

struct Registered
{
    std::string key;
    CLI::Option* option;
    std::string value;
};

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bound states of the generalized Klein-Gordon oscillator in a Goedel-type space-time"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::unique_ptr<Registered>> registered;
    const auto add = [&](CLI::App* sub, std::string_view key, const std::string& help) {
        auto reg = std::make_unique<Registered>();
        reg->key = std::string(key);
        std::string names = "--" + flag_name(key);
        if (key == "A") names = "-A,--a-lin";
        if (key == "B") names = "-B,--b-coul";
        reg->option = sub->add_option(names, reg->value, help);
        registered.push_back(std::move(reg));
    };
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags override)");
        add(sub, "kind", "cornell | pdm");
        add(sub, "alpha", "space-time parameter alpha >= 0");
        add(sub, "mass", "particle (rest) mass");
        add(sub, "omega_osc", "oscillator frequency Omega");
        add(sub, "A", "Cornell linear coefficient");
        add(sub, "B", "Cornell Coulomb coefficient");
        add(sub, "xi", "linear-potential coefficient Xi > 0");
        add(sub, "kc", "position-dependent-mass product K*C");
        add(sub, "l", "y-momentum l");
        add(sub, "k", "z-momentum k");
        add(sub, "n", "Heun polynomial degree");
        add(sub, "e_min", "energy bracket lower end");
        add(sub, "e_max", "energy bracket upper end");
        add(sub, "grid_points", "energy grid points");
        add(sub, "tol", "solver tolerance");
        add(sub, "max_iter", "Newton iteration cap");
        add(sub, "format", "csv | json");
        add(sub, "out", "output path (default stdout)");
    };
    const auto add_state = [&](CLI::App* sub) {
        add(sub, "free", "parameter fixed by the second condition");
        add(sub, "guess_e", "initial energy");
        add(sub, "guess_p", "initial free-parameter value");
        add(sub, "free_min", "fallback scan lower end");
        add(sub, "free_max", "fallback scan upper end");
        add(sub, "free_steps", "fallback scan intervals");
        add(sub, "branch", "positive | negative energy branch");
    };

    auto* spectrum = app.add_subcommand("spectrum", "roots of the energy condition");
    add_common(spectrum);
    auto* joint = app.add_subcommand("joint", "solve both quantization conditions");
    add_common(joint);
    add_state(joint);
    auto* wave = app.add_subcommand("wavefunction", "normalized radial wave function as x,psi");
    add_common(wave);
    add_state(wave);
    add(wave, "x_max", "outer end of the sample grid");
    add(wave, "samples", "number of samples (>= 16)");
    auto* verify_cmd = app.add_subcommand("verify", "finite-difference cross-check");
    add_common(verify_cmd);
    add_state(verify_cmd);
    add(verify_cmd, "fd_points", "finite-difference interior points");
    add(verify_cmd, "x_max", "outer Dirichlet wall");
    auto* scan_cmd = app.add_subcommand("scan", "parameter sweep as param,n,E,residual_coeff");
    add_common(scan_cmd);
    add(scan_cmd, "param", "swept parameter");
    add(scan_cmd, "from", "first value");
    add(scan_cmd, "to", "last value");
    add(scan_cmd, "steps", "number of values (>= 1)");
    add(scan_cmd, "levels", "comma-separated n list");
    auto* selftest = app.add_subcommand("selftest", "built-in consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (selftest->parsed()) {
            return cmd_selftest(out);
        }
        KeyValues kv;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot read config file '" + config_path + "'");
            }
            std::stringstream buf;
            buf << in.rdbuf();
            kv = parse_config_text(buf.str());
        }
        for (const auto& reg : registered) {
            if (reg->option->count() > 0) {
                kv[reg->key] = reg->value;
            }
        }
        const RunConfig rc = RunConfig::from(kv);
        if (spectrum->parsed()) return cmd_spectrum(rc, out);
        if (joint->parsed()) return cmd_joint(rc, kv, out);
        if (wave->parsed()) return cmd_wavefunction(rc, kv, out, err);
        if (verify_cmd->parsed()) return cmd_verify(rc, kv, out);
        if (scan_cmd->parsed()) return cmd_scan(rc, kv, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
            case Errc::invalid_params:
            case Errc::domain_error: return exit_config;
            case Errc::no_root_found: return exit_no_root;
            case Errc::no_convergence: return exit_no_convergence;
            default: return exit_failure;
        }
    }
    return exit_failure;
}

} // namespace kgo::cli
