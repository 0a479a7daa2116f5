#include "gpscatter/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "gpscatter/errors.hpp"
#include "gpscatter/io.hpp"
#include "gpscatter/variational.hpp"

namespace fs = std::filesystem;

namespace gpscatter {

namespace {

const std::vector<std::string> timeseries_columns = {
    "t", "norm", "p_left", "p_right", "mean_x", "rms_width", "energy", "edge_mass"};

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

void append_record(CsvBuilder& csv, const ObservableRecord& r) {
    const double row[] = {r.t,      r.norm,      r.p_left, r.p_right,
                          r.mean_x, r.rms_width, r.energy, r.edge_mass};
    csv.add_row(row);
}

std::vector<double> real_part(const std::vector<Complex>& v) {
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j].real();
    return out;
}

// Records plus optional density streaming and peak counting, shared by
// evolve/compare/sweep.
struct TrajectoryResult {
    std::vector<ObservableRecord> records;
    std::vector<int> peak_counts;
    Evolution evolution;
};

TrajectoryResult run_gpe_trajectory(const ExperimentConfig& cfg,
                                    const Wavefunction& psi0,
                                    DensityWriter* density,
                                    bool with_peaks) {
    const PhysicsParams params = scattering_params(cfg);
    const std::vector<Complex> v = eval_potential(params.spec, psi0.grid);
    const std::vector<double> vr = real_part(v);
    SpectralTransform fft(psi0.grid);

    TrajectoryResult out;
    const long total = std::lround(cfg.t_final / cfg.dt);
    out.records.reserve(static_cast<std::size_t>(total / cfg.snapshot_stride) + 2);

    const Observer observer = [&](long step, const Wavefunction& psi) {
        out.records.push_back(record(psi, vr, params.g_s, &fft));
        if (with_peaks) out.peak_counts.push_back(count_density_peaks(psi));
        if (density && step % cfg.density_stride == 0) density->add_frame(psi);
    };
    Propagator prop(psi0.grid, v, params.g_s, cfg.dt);
    out.evolution = prop.evolve(psi0, cfg.t_final, cfg.snapshot_stride, observer);
    return out;
}

std::vector<VariationalState> run_variational_trajectory(const ExperimentConfig& cfg) {
    return integrate_ode(initial_variational_state(cfg), cfg.v0, cfg.w0, cfg.g_s,
                         cfg.dt, cfg.t_final, cfg.snapshot_stride);
}

std::string optional_cell(const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string{};
}

} // namespace

VariationalState initial_variational_state(const ExperimentConfig& cfg) {
    VariationalState s;
    s.x0 = cfg.x_init;
    s.v = 0.0;
    s.a = equilibrium_width(cfg.g_s);
    s.b = 0.0;
    s.t = 0.0;
    return s;
}

Wavefunction obtain_initial_state(const ExperimentConfig& cfg, const Grid& grid) {
    const fs::path cached = fs::path(cfg.output_dir) / "psi0.bin";
    std::error_code ec;
    if (fs::exists(cached, ec)) {
        Wavefunction psi = read_psi_binary(cached.string());
        if (psi.grid.size() != grid.size() || psi.grid.dx() != grid.dx())
            throw ConfigError("psi0.bin grid does not match the configured grid");
        return psi;
    }
    const PhysicsParams prep{cfg.g_s, preparation_spec(cfg)};
    return ground_state(grid, prep, solver_config(cfg)).psi;
}

void run_groundstate(const ExperimentConfig& cfg) {
    const Grid grid = make_grid(cfg);
    const PhysicsParams prep{cfg.g_s, preparation_spec(cfg)};
    const GroundState gs = ground_state(grid, prep, solver_config(cfg));

    write_psi_binary(out_path(cfg, "psi0.bin"), gs.psi);

    const ObservableRecord r = record(gs.psi, prep);
    const std::vector<std::string> columns = {"energy", "rms_width", "mean_x",
                                              "iterations"};
    CsvBuilder csv(cfg, columns);
    const double row[] = {gs.energy, r.rms_width, r.mean_x,
                          static_cast<double>(gs.iterations)};
    csv.add_row(row);
    write_text_file(out_path(cfg, "summary.csv"), csv.text());
}

void run_evolve(const ExperimentConfig& cfg) {
    const Grid grid = make_grid(cfg);
    const Wavefunction psi0 = obtain_initial_state(cfg, grid);

    const long total = std::lround(cfg.t_final / cfg.dt);
    const std::uint64_t n_frames =
        static_cast<std::uint64_t>(total / cfg.density_stride) + 1;
    DensityWriter density(out_path(cfg, "density.bin"), grid.size(), n_frames,
                          grid.dx(), cfg.dt * static_cast<double>(cfg.density_stride));

    const TrajectoryResult res = run_gpe_trajectory(cfg, psi0, &density, false);
    density.finish();

    CsvBuilder csv(cfg, timeseries_columns);
    for (const ObservableRecord& r : res.records) append_record(csv, r);
    write_text_file(out_path(cfg, "timeseries.csv"), csv.text());
}

void run_variational(const ExperimentConfig& cfg) {
    const std::vector<VariationalState> traj = run_variational_trajectory(cfg);
    const std::vector<std::string> columns = {"t", "x0", "v", "a", "b"};
    CsvBuilder csv(cfg, columns);
    for (const VariationalState& s : traj) {
        const double row[] = {s.t, s.x0, s.v, s.a, s.b};
        csv.add_row(row);
    }
    write_text_file(out_path(cfg, "var_timeseries.csv"), csv.text());
}

void run_compare(const ExperimentConfig& cfg) {
    const Grid grid = make_grid(cfg);
    const Wavefunction psi0 = obtain_initial_state(cfg, grid);

    const TrajectoryResult gpe = run_gpe_trajectory(cfg, psi0, nullptr, true);
    const std::vector<VariationalState> var = run_variational_trajectory(cfg);
    const ComparisonReport rep =
        compare(gpe.records, var, cfg.center_threshold, gpe.peak_counts);

    const std::vector<std::string> columns = {
        "t",     "gpe_mean_x", "gpe_width", "var_x0",
        "var_a", "center_gap", "width_gap", "gpe_peaks"};
    CsvBuilder csv(cfg, columns);
    for (std::size_t i = 0; i < gpe.records.size(); ++i) {
        const ObservableRecord& r = gpe.records[i];
        const VariationalState& s = var[i];
        const double gpe_width = std::sqrt(2.0) * r.rms_width;
        const double row[] = {r.t,
                              r.mean_x,
                              gpe_width,
                              s.x0,
                              s.a,
                              std::abs(r.mean_x - s.x0),
                              std::abs(gpe_width - s.a),
                              static_cast<double>(gpe.peak_counts[i])};
        csv.add_row(row);
    }
    write_text_file(out_path(cfg, "compare.csv"), csv.text());

    const std::vector<std::string> report_columns = {
        "max_center_gap", "max_width_gap",         "t_divergence",
        "threshold",      "t_first_non_gaussian",  "verdict"};
    CsvBuilder report(cfg, report_columns);
    const std::string row[] = {format_g17(rep.max_center_gap),
                               format_g17(rep.max_width_gap),
                               optional_cell(rep.t_divergence),
                               format_g17(rep.threshold),
                               optional_cell(rep.t_first_non_gaussian),
                               rep.verdict()};
    report.add_row(row);
    write_text_file(out_path(cfg, "report.csv"), report.text());
}

void run_sweep(const ExperimentConfig& cfg) {
    const Grid grid = make_grid(cfg);
    const Wavefunction psi0 = obtain_initial_state(cfg, grid);

    // lexicographic (v0, w0) order, independent of list order in the config
    std::vector<double> v0s = cfg.sweep_v0;
    std::vector<double> w0s = cfg.sweep_w0;
    std::sort(v0s.begin(), v0s.end());
    std::sort(w0s.begin(), w0s.end());
    struct Point {
        double v0, w0;
        std::string status = "ok";
        double final_pl = 0, final_pr = 0, avg_pl = 0, avg_pr = 0;
        bool failed = false;
    };
    std::vector<Point> points;
    for (double v0 : v0s)
        for (double w0 : w0s) points.push_back({v0, w0});

    unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, points.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            Point& pt = points[i];
            ExperimentConfig point_cfg = cfg;
            point_cfg.v0 = pt.v0;
            point_cfg.w0 = pt.w0;
            try {
                const TrajectoryResult res =
                    run_gpe_trajectory(point_cfg, psi0, nullptr, false);
                const auto& recs = res.records;
                pt.final_pl = recs.back().p_left;
                pt.final_pr = recs.back().p_right;
                const double t_from = 0.75 * cfg.t_final;
                double sl = 0, sr = 0;
                long count = 0;
                for (const ObservableRecord& r : recs)
                    if (r.t >= t_from) {
                        sl += r.p_left;
                        sr += r.p_right;
                        ++count;
                    }
                pt.avg_pl = sl / static_cast<double>(count);
                pt.avg_pr = sr / static_cast<double>(count);
            } catch (const NumericalError&) {
                pt.status = "numerical_error";
                pt.failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    const std::vector<std::string> columns = {
        "v0",           "w0",          "status",     "final_p_left",
        "final_p_right", "avg_p_left", "avg_p_right"};
    CsvBuilder csv(cfg, columns);
    for (const Point& pt : points) {
        const std::string row[] = {
            format_g17(pt.v0),
            format_g17(pt.w0),
            pt.status,
            pt.failed ? std::string{} : format_g17(pt.final_pl),
            pt.failed ? std::string{} : format_g17(pt.final_pr),
            pt.failed ? std::string{} : format_g17(pt.avg_pl),
            pt.failed ? std::string{} : format_g17(pt.avg_pr)};
        csv.add_row(row);
    }
    write_text_file(out_path(cfg, "sweep.csv"), csv.text());
}

void run_command(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.command == "groundstate") run_groundstate(cfg);
    else if (cfg.command == "evolve") run_evolve(cfg);
    else if (cfg.command == "variational") run_variational(cfg);
    else if (cfg.command == "compare") run_compare(cfg);
    else if (cfg.command == "sweep") run_sweep(cfg);
    else throw ConfigError("no command selected");
}

} // namespace gpscatter
