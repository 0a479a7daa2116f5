#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "gpscatter/config.hpp"
#include "gpscatter/grid.hpp"

namespace gpscatter {

/// Wavefunction container: magic "GPSW", u32 version=1, u64 n, f64 dx,
/// f64 t, then 2n little-endian f64 (re, im interleaved).
void write_psi_binary(const std::string& path, const Wavefunction& psi);
Wavefunction read_psi_binary(const std::string& path);

/// Streaming writer for the density container: magic "GPSD", u32 version=1,
/// u64 n, u64 n_snapshots, f64 dx, f64 dt_snapshot, then row-major f64
/// |psi|^2 frames. The frame count is fixed up front; finish() verifies it.
class DensityWriter {
public:
    DensityWriter(const std::string& path, std::size_t n, std::uint64_t n_snapshots,
                  double dx, double dt_snapshot);
    ~DensityWriter();
    DensityWriter(const DensityWriter&) = delete;
    DensityWriter& operator=(const DensityWriter&) = delete;

    void add_frame(const Wavefunction& psi);
    void finish();

private:
    std::FILE* f_ = nullptr;
    std::string path_;
    std::size_t n_;
    std::uint64_t expected_;
    std::uint64_t written_ = 0;
    std::vector<double> scratch_;
};

/// Parsed density container (for tests and downstream tooling).
struct DensityFile {
    std::uint64_t n = 0;
    double dx = 0.0;
    double dt_snapshot = 0.0;
    std::vector<std::vector<double>> frames;
};
DensityFile read_density_binary(const std::string& path);

/// In-memory CSV builder. Every file starts with the canonical config echo
/// as a '#' comment block, then the column header, then rows with floats
/// rendered at 17 significant digits. Cells may also be preformatted
/// strings (verdicts, status tags, empty optionals).
class CsvBuilder {
public:
    CsvBuilder(const ExperimentConfig& cfg, std::span<const std::string> columns);
    void add_row(std::span<const double> values);
    void add_row(std::span<const std::string> cells);
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::size_t n_columns_;
};

/// Whole-file write; throws IoError.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace gpscatter
