#include "gpscatter/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gpscatter/errors.hpp"

namespace gpscatter {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view v, int line) {
    const std::string s(v);
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        fail(line, "expected a number, got '" + s + "'");
    if (!std::isfinite(x)) fail(line, "non-finite value '" + s + "'");
    return x;
}

long parse_long(std::string_view v, int line) {
    const std::string s(v);
    char* end = nullptr;
    const long x = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty())
        fail(line, "expected an integer, got '" + s + "'");
    return x;
}

std::vector<double> parse_list(std::string_view v, int line) {
    std::vector<double> out;
    std::string_view rest = trim(v);
    if (rest.empty()) return out;
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item.empty()) fail(line, "empty list element");
        out.push_back(parse_double(item, line));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

const std::set<std::string> known_commands = {
    "groundstate", "evolve", "variational", "compare", "sweep"};

} // namespace

ExperimentConfig parse_config_text(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;

    std::string_view rest = text;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view raw = rest.substr(0, nl);
        rest = (nl == std::string_view::npos) ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;

        std::string_view s = trim(raw);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail(line_no, "unterminated section header");
            section = std::string(trim(s.substr(1, s.size() - 2)));
            if (section != "grid" && section != "physics" && section != "time" &&
                section != "run")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = s.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key=value");
        const std::string key(trim(s.substr(0, eq)));
        const std::string_view value = trim(s.substr(eq + 1));
        if (section.empty()) fail(line_no, "key outside of a section");
        const std::string qual = section + "." + key;
        if (!seen.insert(qual).second) fail(line_no, "duplicate key " + qual);

        if (qual == "grid.n") cfg.n = parse_long(value, line_no);
        else if (qual == "grid.dx") cfg.dx = parse_double(value, line_no);
        else if (qual == "physics.g_s") cfg.g_s = parse_double(value, line_no);
        else if (qual == "physics.v0") cfg.v0 = parse_double(value, line_no);
        else if (qual == "physics.w0") cfg.w0 = parse_double(value, line_no);
        else if (qual == "physics.obstacle_width") cfg.obstacle_width = parse_double(value, line_no);
        else if (qual == "physics.x_init") cfg.x_init = parse_double(value, line_no);
        else if (qual == "time.dt") cfg.dt = parse_double(value, line_no);
        else if (qual == "time.t_final") cfg.t_final = parse_double(value, line_no);
        else if (qual == "time.snapshot_stride") cfg.snapshot_stride = parse_long(value, line_no);
        else if (qual == "time.density_stride") cfg.density_stride = parse_long(value, line_no);
        else if (qual == "time.imag_dt") cfg.imag_dt = parse_double(value, line_no);
        else if (qual == "time.imag_tol") cfg.imag_tol = parse_double(value, line_no);
        else if (qual == "time.max_imag_steps") cfg.max_imag_steps = parse_long(value, line_no);
        else if (qual == "run.command") cfg.command = std::string(value);
        else if (qual == "run.output_dir") cfg.output_dir = std::string(value);
        else if (qual == "run.sweep_v0") cfg.sweep_v0 = parse_list(value, line_no);
        else if (qual == "run.sweep_w0") cfg.sweep_w0 = parse_list(value, line_no);
        else if (qual == "run.center_threshold") cfg.center_threshold = parse_double(value, line_no);
        else fail(line_no, "unknown key " + qual);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw ConfigError("config is not a readable file: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw ConfigError("failed reading config file: " + path);
    return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    const auto bad = [](const std::string& msg) { throw ConfigError(msg); };

    if (cfg.n < 16 || (cfg.n & (cfg.n - 1)) != 0)
        bad("grid.n must be a power of two >= 16");
    if (!(cfg.dx > 0.0)) bad("grid.dx must be positive");
    if (cfg.g_s < 0.0) bad("physics.g_s must be >= 0");
    if (!(cfg.obstacle_width > 0.0)) bad("physics.obstacle_width must be positive");
    if (!(cfg.dt > 0.0)) bad("time.dt must be positive");
    if (!(cfg.t_final > 0.0)) bad("time.t_final must be positive");
    if (cfg.snapshot_stride < 1) bad("time.snapshot_stride must be >= 1");
    if (cfg.density_stride < 1) bad("time.density_stride must be >= 1");
    if (cfg.density_stride % cfg.snapshot_stride != 0)
        bad("time.density_stride must be a multiple of time.snapshot_stride");
    if (!(cfg.imag_dt > 0.0)) bad("time.imag_dt must be positive");
    if (!(cfg.imag_tol > 0.0)) bad("time.imag_tol must be positive");
    if (cfg.max_imag_steps < 1) bad("time.max_imag_steps must be >= 1");
    if (cfg.center_threshold <= 0.0) bad("run.center_threshold must be positive");
    if (cfg.jobs < 0) bad("run.jobs must be >= 0");
    if (cfg.output_dir.empty()) bad("run.output_dir must not be empty");
    if (!cfg.command.empty() && !known_commands.count(cfg.command))
        bad("run.command must be one of groundstate|evolve|variational|compare|sweep");
    if (cfg.command == "sweep" && (cfg.sweep_v0.empty() || cfg.sweep_w0.empty()))
        bad("run.sweep_v0 and run.sweep_w0 must be non-empty for sweep");
    if ((cfg.command == "variational" || cfg.command == "compare") && cfg.dt > 1e-3)
        bad("time.dt must be <= 1e-3 for variational integration");
    if (std::lround(cfg.t_final / cfg.dt) < 1)
        bad("time.t_final must cover at least one step");
    // the prepared condensate must fit well inside the periodic box
    const double half = 0.5 * static_cast<double>(cfg.n) * cfg.dx;
    if (std::abs(cfg.x_init) > 0.9 * half)
        bad("physics.x_init must lie within 90% of the half extent");
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_g17(v[i]);
    }
    return out;
}
} // namespace

std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::string s;
    s += "[grid]\n";
    s += "n=" + std::to_string(cfg.n) + "\n";
    s += "dx=" + format_g17(cfg.dx) + "\n";
    s += "[physics]\n";
    s += "g_s=" + format_g17(cfg.g_s) + "\n";
    s += "v0=" + format_g17(cfg.v0) + "\n";
    s += "w0=" + format_g17(cfg.w0) + "\n";
    s += "obstacle_width=" + format_g17(cfg.obstacle_width) + "\n";
    s += "x_init=" + format_g17(cfg.x_init) + "\n";
    s += "[time]\n";
    s += "dt=" + format_g17(cfg.dt) + "\n";
    s += "t_final=" + format_g17(cfg.t_final) + "\n";
    s += "snapshot_stride=" + std::to_string(cfg.snapshot_stride) + "\n";
    s += "density_stride=" + std::to_string(cfg.density_stride) + "\n";
    s += "imag_dt=" + format_g17(cfg.imag_dt) + "\n";
    s += "imag_tol=" + format_g17(cfg.imag_tol) + "\n";
    s += "max_imag_steps=" + std::to_string(cfg.max_imag_steps) + "\n";
    // output_dir (like jobs) is a destination, not part of the experiment
    // definition, so it stays out of the provenance echo.
    s += "[run]\n";
    s += "command=" + cfg.command + "\n";
    s += "sweep_v0=" + format_list(cfg.sweep_v0) + "\n";
    s += "sweep_w0=" + format_list(cfg.sweep_w0) + "\n";
    s += "center_threshold=" + format_g17(cfg.center_threshold) + "\n";
    return s;
}

Grid make_grid(const ExperimentConfig& cfg) {
    return Grid::make(static_cast<std::size_t>(cfg.n), cfg.dx);
}

PotentialSpec preparation_spec(const ExperimentConfig& cfg) {
    return {cfg.x_init, 0.0, 0.0, cfg.obstacle_width};
}

PotentialSpec scattering_spec(const ExperimentConfig& cfg) {
    return {0.0, cfg.v0, cfg.w0, cfg.obstacle_width};
}

SolverConfig solver_config(const ExperimentConfig& cfg) {
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.t_final = cfg.t_final;
    sc.snapshot_stride = cfg.snapshot_stride;
    sc.mode = TimeMode::real_time;
    sc.imag_dt = cfg.imag_dt;
    sc.imag_tol = cfg.imag_tol;
    sc.max_imag_steps = cfg.max_imag_steps;
    return sc;
}

PhysicsParams scattering_params(const ExperimentConfig& cfg) {
    return {cfg.g_s, scattering_spec(cfg)};
}

} // namespace gpscatter
