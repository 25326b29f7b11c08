#include "fctncd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fctncd/bench.hpp"
#include "fctncd/error.hpp"
#include "fctncd/limiter.hpp"
#include "fctncd/lp.hpp"
#include "fctncd/stepper.hpp"

namespace fctncd {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string location(const std::string& origin, int line, int column)
{
    return origin + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::string g6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double parse_number(const std::string& text, bool& ok)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    ok = !text.empty() && end == text.c_str() + text.size() && std::isfinite(v);
    return v;
}

/// Maps library errors onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "invalid problem data: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StabilityError& e) {
        err << "inadmissible time step: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

std::filesystem::path output_directory(const ConfigFile& cfg)
{
    if (const char* env = std::getenv("FCTNCD_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        cfg.get_string("output.directory", "");  // still a known key
        return env;
    }
    return cfg.get_string("output.directory", "out");
}

void write_snapshot(const std::filesystem::path& path, const Grid& grid, const ScalarField& f)
{
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write " + path.string());
    }
    const Shape& s = grid.shape();
    os << (s.dim == 2 ? "x,y,value\n" : "x,value\n");
    for (std::size_t j = 0; j < s.rows(); ++j) {
        for (std::size_t i = 0; i < s.stride(); ++i) {
            os << g17(grid.x(i)) << ',';
            if (s.dim == 2) {
                os << g17(grid.y(j)) << ',';
            }
            os << g17(f(i, j)) << '\n';
        }
    }
}

ManufacturedSolution manufactured_profile(const ConfigFile& cfg)
{
    const std::string profile = cfg.get_string("problem.profile", "sine");
    if (profile == "constant") {
        return constant_solution(cfg.get_double("problem.value", 1.0));
    }
    if (profile == "linear") {
        return linear_solution(cfg.get_double("problem.slope", 1.0),
                               cfg.get_double("problem.intercept", 0.0));
    }
    if (profile == "sine") {
        return travelling_sine(cfg.get_double("problem.wavenumber", 2.0 * std::numbers::pi),
                               cfg.get_double("problem.wave_speed", 1.0));
    }
    throw ConfigError("problem.profile must be constant, linear or sine, got '" + profile + "'");
}

ManufacturedParams manufactured_params(const ConfigFile& cfg)
{
    ManufacturedParams p;
    p.velocity = cfg.get_double("problem.velocity", 1.0);
    p.diffusion = cfg.get_double("problem.diffusion", 0.0);
    p.reaction = cfg.get_double("problem.reaction", 0.0);
    p.a = cfg.get_double("problem.a", 0.0);
    p.b = cfg.get_double("problem.b", 1.0);
    p.cells = cfg.get_size("problem.cells", 50);
    return p;
}

/// dt from scheme.dt, or from scheme.courant with the smallest spacing and max |u|.
double time_step(const ConfigFile& cfg, double case_dt, double h, double speed)
{
    if (cfg.has("scheme.dt") && cfg.has("scheme.courant")) {
        throw ConfigError("set either scheme.dt or scheme.courant, not both");
    }
    if (cfg.has("scheme.courant")) {
        const double c = cfg.get_double("scheme.courant", 0.0);
        if (!(speed > 0.0)) {
            throw ConfigError("scheme.courant needs a nonzero velocity");
        }
        return c * h / speed;
    }
    return cfg.get_double("scheme.dt", case_dt);
}

BenchmarkCase build_case(const ConfigFile& cfg)
{
    const std::string name = cfg.get_string("problem.case", "advection");
    if (name == "advection") {
        BenchmarkCase c = advection_case(cfg.get_double("problem.gaussian_width", kLeonardGaussianWidth));
        c.dt = time_step(cfg, c.dt, 0.01, 1.0);
        c.steps = cfg.get_size("problem.steps", c.steps);
        if (c.dt != 0.002 || c.steps != 400) {
            // The shifted profile is exact only for the run length it was built for.
            const double shift = c.dt * static_cast<double>(c.steps);
            const double width = cfg.get_double("problem.gaussian_width", kLeonardGaussianWidth);
            c.exact = [shift, width](double x, double) { return leonard_profile(x - shift, width); };
        }
        return c;
    }
    if (name == "rotation") {
        const std::size_t cells = cfg.get_size("problem.cells", 128);
        const std::size_t steps = cfg.get_size("problem.steps", 5000);
        BenchmarkCase c = rotation_case(cells, steps);
        if (cfg.has("scheme.dt") || cfg.has("scheme.courant")) {
            throw ConfigError("rotation derives dt from problem.steps (one revolution)");
        }
        return c;
    }
    if (name == "manufactured") {
        ManufacturedParams p = manufactured_params(cfg);
        const double h = (p.b - p.a) / static_cast<double>(std::max<std::size_t>(p.cells, 1));
        p.dt = time_step(cfg, 1e-3, h, std::abs(p.velocity));
        p.steps = cfg.get_size("problem.steps", 100);
        return manufactured_case(manufactured_profile(cfg), p);
    }
    throw ConfigError("problem.case must be advection, rotation or manufactured, got '" + name + "'");
}

StepConfig step_config(const ConfigFile& cfg, double dt)
{
    StepConfig c;
    c.dt = dt;
    c.scheme = parse_scheme(cfg.get_string("scheme.name", "NDVA"));
    c.sigma = cfg.get_double("scheme.sigma", 0.0);
    c.oracle = cfg.get_bool("scheme.oracle", false);
    c.delta = cfg.get_double("scheme.delta", c.delta);
    c.eps1 = cfg.get_double("scheme.eps1", c.eps1);
    c.eps2_per_variable = cfg.get_double("scheme.eps2_per_variable", c.eps2_per_variable);
    c.max_outer_iterations =
        static_cast<int>(cfg.get_size("scheme.max_outer_iterations", c.max_outer_iterations));
    c.validate();
    return c;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin)
{
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw ConfigError(location(origin, line_no, indent) + ": malformed section header");
            }
            section = trim(body.substr(1, body.size() - 2));
            if (section != "problem" && section != "scheme" && section != "output" &&
                section != "converge") {
                throw ConfigError(location(origin, line_no, indent + 1) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(location(origin, line_no, indent) + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError(location(origin, line_no, indent) + ": key outside of a section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(location(origin, line_no, indent) + ": missing key");
        }
        const auto value_pos = line.find_first_not_of(" \t", eq + 1);
        const int value_col = static_cast<int>(value_pos == std::string::npos ? eq + 1 : value_pos) + 1;
        if (value.empty()) {
            throw ConfigError(location(origin, line_no, value_col) + ": missing value for '" + key + "'");
        }
        const std::string full = section + "." + key;
        if (cfg.entries_.count(full) != 0) {
            throw ConfigError(location(origin, line_no, indent) + ": duplicate key '" + full + "'");
        }
        cfg.entries_[full] = Entry{value, line_no, value_col, false};
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

const ConfigFile::Entry* ConfigFile::find(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return nullptr;
    }
    it->second.used = true;
    return &it->second;
}

void ConfigFile::fail(const Entry& e, const std::string& key, const std::string& what) const
{
    throw ConfigError(location(origin_, e.line, e.column) + ": " + key + ": " + what + " (got '" +
                      e.value + "')");
}

bool ConfigFile::has(const std::string& key) const
{
    return entries_.count(key) != 0;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const
{
    const Entry* e = find(key);
    return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& key, double fallback) const
{
    const Entry* e = find(key);
    if (!e) {
        return fallback;
    }
    bool ok = false;
    const double v = parse_number(e->value, ok);
    if (!ok) {
        fail(*e, key, "expected a number");
    }
    return v;
}

std::size_t ConfigFile::get_size(const std::string& key, std::size_t fallback) const
{
    const Entry* e = find(key);
    if (!e) {
        return fallback;
    }
    bool ok = false;
    const double v = parse_number(e->value, ok);
    if (!ok || v < 0.0 || v != std::floor(v) || v > 1e15) {
        fail(*e, key, "expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const
{
    const Entry* e = find(key);
    if (!e) {
        return fallback;
    }
    if (e->value == "true" || e->value == "yes" || e->value == "1") {
        return true;
    }
    if (e->value == "false" || e->value == "no" || e->value == "0") {
        return false;
    }
    fail(*e, key, "expected true or false");
}

std::vector<double> ConfigFile::get_list(const std::string& key,
                                         const std::vector<double>& fallback) const
{
    const Entry* e = find(key);
    if (!e) {
        return fallback;
    }
    std::vector<double> out;
    for (const std::string& item : split_list(e->value)) {
        bool ok = false;
        out.push_back(parse_number(item, ok));
        if (!ok) {
            fail(*e, key, "expected a comma-separated list of numbers");
        }
    }
    if (out.empty()) {
        fail(*e, key, "empty list");
    }
    return out;
}

void ConfigFile::reject_unused() const
{
    for (const auto& [key, e] : entries_) {
        if (!e.used) {
            throw ConfigError(location(origin_, e.line, 1) + ": unknown key '" + key + "'");
        }
    }
}

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ConfigFile cfg = ConfigFile::load(config);
        const BenchmarkCase bench = build_case(cfg);
        const StepConfig step = step_config(cfg, bench.dt);
        const std::filesystem::path dir = output_directory(cfg);
        const std::string prefix = cfg.get_string("output.prefix", "run");
        const std::size_t every = cfg.get_size("output.snapshot_every", 0);
        const bool dump = cfg.has("output.dump_step");
        const std::size_t dump_step = cfg.get_size("output.dump_step", 0);
        cfg.reject_unused();
        std::filesystem::create_directories(dir);

        std::size_t current_step = 0;
        RunOptions options;
        options.steps = bench.steps;
        options.snapshot_every = every;
        std::vector<std::filesystem::path> written;
        options.on_snapshot = [&](std::size_t n, const ScalarField& f) {
            char name[64];
            std::snprintf(name, sizeof name, "_%06zu.csv", n);
            const auto path = dir / (prefix + name);
            write_snapshot(path, bench.grid, f);
            written.push_back(path);
        };
        std::ofstream oracle_log;
        if (step.oracle) {
            oracle_log.open(dir / (prefix + "_oracle.log"));
            oracle_log << "step,iterations,max_objective_gap\n";
        }
        options.on_report = [&](std::size_t n, const IterationReport& r) {
            current_step = n;
            if (oracle_log.is_open()) {
                oracle_log << n << ',' << r.iterations << ',' << g6(r.oracle_gap) << '\n';
            }
        };
        if (dump) {
            options.probe = [&](const LimiterContext& ctx) {
                // on_report fires after the step, so current_step is the previous one.
                if (current_step + 1 != dump_step) {
                    return;
                }
                const std::string tag = prefix + "_step" + std::to_string(dump_step) + "_it" +
                                        std::to_string(ctx.iteration);
                std::ofstream lp(dir / (tag + "_lp.txt"));
                write_program(lp, *ctx.program);
                if (ctx.limiters->kind == LimiterSet::Kind::Node) {
                    std::ofstream lim(dir / (tag + "_limiters.csv"));
                    write_limiters_csv(lim, *ctx.limiters);
                }
            };
        }

        const RunResult result = run_simulation(bench.grid, bench.spec, step, options);

        std::ostringstream summary;
        summary << "config " << config.string() << '\n';
        for (const auto& [key, e] : cfg.entries()) {
            summary << "  " << key << " = " << e.value << '\n';
        }
        summary << "case " << bench.name << " scheme " << to_string(step.scheme) << " sigma "
                << g6(step.sigma) << " dt " << g6(step.dt) << " steps " << result.steps << '\n';
        summary << "outer iterations mean " << g6(result.mean_iterations()) << " max "
                << result.max_iterations << " nonconverged steps " << result.nonconverged_steps
                << '\n';
        if (step.oracle) {
            summary << "oracle max |dense - separable| objective gap " << g6(result.max_oracle_gap)
                    << " over " << result.steps << " steps\n";
        }
        for (const ErrorRow& r : measure(bench, result.final_field, step.sigma, step.scheme,
                                         result.nonconverged_steps == 0)) {
            summary << "window " << r.shape << " l1_error " << g6(r.l1_error) << " l1_alt "
                    << g6(r.l1_alt) << " y_max " << g6(r.y_max) << '\n';
        }
        for (const auto& p : written) {
            summary << "snapshot " << p.string() << '\n';
        }
        out << summary.str();
        std::ofstream(dir / (prefix + "_summary.txt")) << summary.str();

        if (result.nonconverged_steps > 0) {
            err << "outer iteration did not converge on " << result.nonconverged_steps
                << " step(s)\n";
            return static_cast<int>(kExitNonConvergence);
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::vector<SchemeKind> schemes;
        for (const std::string& s : args.schemes) {
            schemes.push_back(parse_scheme(s));
        }
        for (double s : args.sigmas) {
            if (!(s >= 0.0 && s <= 1.0)) {
                throw ConfigError("sigma values must lie in [0, 1]");
            }
        }
        BenchmarkCase bench = [&] {
            if (args.suite == "advection") {
                return advection_case();
            }
            if (args.suite == "rotation") {
                return rotation_case(args.cells, args.steps);
            }
            throw ConfigError("unknown suite '" + args.suite + "' (expected advection or rotation)");
        }();
        TableOptions options;
        options.oracle = args.oracle;
        const ErrorReport report = run_table(bench, schemes, args.sigmas, options);
        if (args.out) {
            std::ofstream os(*args.out);
            if (!os) {
                throw ConfigError("cannot write " + args.out->string());
            }
            report.write_csv(os);
        } else {
            report.write_csv(out);
        }
        const bool all_converged = std::all_of(report.rows.begin(), report.rows.end(),
                                               [](const ErrorRow& r) { return r.converged; });
        if (!all_converged) {
            err << "some runs had non-converged steps\n";
            return static_cast<int>(kExitNonConvergence);
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_converge(const std::filesystem::path& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ConfigFile cfg = ConfigFile::load(config);
        const std::string name = cfg.get_string("problem.case", "manufactured");
        if (name != "manufactured") {
            throw ConfigError("converge runs problem.case = manufactured only");
        }
        const ManufacturedSolution solution = manufactured_profile(cfg);
        const ManufacturedParams base = manufactured_params(cfg);
        const std::vector<double> levels = cfg.get_list("converge.levels", {20, 40, 80, 160});
        const double t_end = cfg.get_double("converge.t_end", 0.5);
        const double dt_power = cfg.get_double("converge.dt_power", 1.0);
        const double base_dt = time_step(cfg, 1e-3, (base.b - base.a) / levels.front(),
                                         std::abs(base.velocity));
        const StepConfig scheme = step_config(cfg, base_dt);
        const std::filesystem::path dir = output_directory(cfg);
        const bool write_csv = cfg.has("output.directory") ||
                               std::getenv("FCTNCD_OUTPUT_DIR") != nullptr;
        const std::string prefix = cfg.get_string("output.prefix", "converge");
        cfg.reject_unused();
        if (!(t_end > 0.0)) {
            throw ConfigError("converge.t_end must be positive");
        }

        std::ostringstream table;
        table << "level,cells,h,dt,steps,l1_error,max_error,order\n";
        double prev_error = 0.0;
        double prev_h = 0.0;
        std::size_t nonconverged = 0;
        for (std::size_t l = 0; l < levels.size(); ++l) {
            if (!(levels[l] >= 3.0) || levels[l] != std::floor(levels[l])) {
                throw ConfigError("converge.levels must be integers >= 3");
            }
            ManufacturedParams p = base;
            p.cells = static_cast<std::size_t>(levels[l]);
            const double h = (p.b - p.a) / levels[l];
            const double h0 = (p.b - p.a) / levels.front();
            const double dt_target = base_dt * std::pow(h / h0, dt_power);
            p.steps = static_cast<std::size_t>(std::ceil(t_end / dt_target - 1e-9));
            p.dt = t_end / static_cast<double>(p.steps);
            const BenchmarkCase bench = manufactured_case(solution, p);
            StepConfig step = scheme;
            step.dt = p.dt;
            RunOptions options;
            options.steps = p.steps;
            const RunResult result = run_simulation(bench.grid, bench.spec, step, options);
            nonconverged += result.nonconverged_steps;
            const ScalarField exact = bench.exact_field();
            const Window& all = bench.windows.front();
            const double e1 = l1_error(bench.grid, result.final_field, exact, all);
            double emax = 0.0;
            const auto a = result.final_field.interior();
            const auto b = exact.interior();
            for (std::size_t k = 0; k < a.size(); ++k) {
                emax = std::max(emax, std::abs(a[k] - b[k]));
            }
            table << l << ',' << p.cells << ',' << g6(h) << ',' << g6(p.dt) << ',' << p.steps
                  << ',' << g6(e1) << ',' << g6(emax) << ',';
            if (l > 0 && prev_error > 0.0 && e1 > 0.0) {
                table << g6(std::log(prev_error / e1) / std::log(prev_h / h));
            } else {
                table << "nan";
            }
            table << '\n';
            prev_error = e1;
            prev_h = h;
        }
        out << table.str();
        if (write_csv) {
            std::filesystem::create_directories(dir);
            std::ofstream(dir / (prefix + ".csv")) << table.str();
        }
        if (nonconverged > 0) {
            err << "outer iteration did not converge on " << nonconverged << " step(s)\n";
            return static_cast<int>(kExitNonConvergence);
        }
        return static_cast<int>(kExitOk);
    });
}

}  // namespace fctncd
