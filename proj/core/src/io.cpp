#include "gpscatter/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gpscatter/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary containers are defined little-endian");

namespace gpscatter {

namespace {

constexpr char psi_magic[4] = {'G', 'P', 'S', 'W'};
constexpr char density_magic[4] = {'G', 'P', 'S', 'D'};
constexpr std::uint32_t container_version = 1;

template <typename T>
void put(std::string& out, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    out.append(p, sizeof(T));
}

template <typename T>
T take(const std::string& s, std::size_t& off, const std::string& path) {
    if (off + sizeof(T) > s.size())
        throw IoError("truncated file: " + path);
    T v;
    std::memcpy(&v, s.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

} // namespace

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string s((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return s;
}

void write_psi_binary(const std::string& path, const Wavefunction& psi) {
    std::string out;
    out.reserve(32 + 16 * psi.amp.size());
    out.append(psi_magic, 4);
    put(out, container_version);
    put(out, static_cast<std::uint64_t>(psi.amp.size()));
    put(out, psi.grid.dx());
    put(out, psi.t);
    for (const Complex& c : psi.amp) {
        put(out, c.real());
        put(out, c.imag());
    }
    write_text_file(path, out);
}

Wavefunction read_psi_binary(const std::string& path) {
    const std::string s = read_text_file(path);
    std::size_t off = 0;
    char magic[4];
    if (s.size() < 4) throw IoError("truncated file: " + path);
    std::memcpy(magic, s.data(), 4);
    off = 4;
    if (std::memcmp(magic, psi_magic, 4) != 0)
        throw IoError("not a wavefunction container: " + path);
    const auto version = take<std::uint32_t>(s, off, path);
    if (version != container_version)
        throw IoError("unsupported container version in " + path);
    const auto n = take<std::uint64_t>(s, off, path);
    const auto dx = take<double>(s, off, path);
    const auto t = take<double>(s, off, path);
    Grid grid = Grid::make(static_cast<std::size_t>(n), dx);
    Wavefunction psi{grid, std::vector<Complex>(n), t};
    for (std::uint64_t j = 0; j < n; ++j) {
        const double re = take<double>(s, off, path);
        const double im = take<double>(s, off, path);
        psi.amp[j] = Complex{re, im};
    }
    if (off != s.size()) throw IoError("trailing bytes in " + path);
    return psi;
}

DensityWriter::DensityWriter(const std::string& path, std::size_t n,
                             std::uint64_t n_snapshots, double dx,
                             double dt_snapshot)
    : path_(path), n_(n), expected_(n_snapshots), scratch_(n) {
    f_ = std::fopen(path.c_str(), "wb");
    if (!f_) throw IoError("cannot open for writing: " + path);
    std::string header;
    header.append(density_magic, 4);
    put(header, container_version);
    put(header, static_cast<std::uint64_t>(n));
    put(header, n_snapshots);
    put(header, dx);
    put(header, dt_snapshot);
    if (std::fwrite(header.data(), 1, header.size(), f_) != header.size()) {
        std::fclose(f_);
        f_ = nullptr;
        throw IoError("write failed: " + path);
    }
}

DensityWriter::~DensityWriter() {
    if (f_) std::fclose(f_);
}

void DensityWriter::add_frame(const Wavefunction& psi) {
    if (!f_) throw IoError("density writer already finished: " + path_);
    if (psi.amp.size() != n_) throw IoError("density frame length mismatch");
    if (written_ >= expected_)
        throw IoError("more density frames than declared in " + path_);
    for (std::size_t j = 0; j < n_; ++j) scratch_[j] = std::norm(psi.amp[j]);
    if (std::fwrite(scratch_.data(), sizeof(double), n_, f_) != n_)
        throw IoError("write failed: " + path_);
    ++written_;
}

void DensityWriter::finish() {
    if (!f_) return;
    const bool ok = (std::fclose(f_) == 0);
    f_ = nullptr;
    if (!ok) throw IoError("close failed: " + path_);
    if (written_ != expected_)
        throw IoError("density frame count mismatch in " + path_);
}

DensityFile read_density_binary(const std::string& path) {
    const std::string s = read_text_file(path);
    if (s.size() < 4 || std::memcmp(s.data(), density_magic, 4) != 0)
        throw IoError("not a density container: " + path);
    std::size_t off = 4;
    const auto version = take<std::uint32_t>(s, off, path);
    if (version != container_version)
        throw IoError("unsupported container version in " + path);
    DensityFile d;
    d.n = take<std::uint64_t>(s, off, path);
    const auto frames = take<std::uint64_t>(s, off, path);
    d.dx = take<double>(s, off, path);
    d.dt_snapshot = take<double>(s, off, path);
    d.frames.assign(frames, std::vector<double>(d.n));
    for (auto& frame : d.frames)
        for (auto& v : frame) v = take<double>(s, off, path);
    if (off != s.size()) throw IoError("trailing bytes in " + path);
    return d;
}

CsvBuilder::CsvBuilder(const ExperimentConfig& cfg,
                       std::span<const std::string> columns)
    : n_columns_(columns.size()) {
    const std::string echo = canonical_config_text(cfg);
    std::string_view rest = echo;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        text_ += "# ";
        text_ += rest.substr(0, nl);
        text_ += '\n';
        rest = (nl == std::string_view::npos) ? std::string_view{} : rest.substr(nl + 1);
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvBuilder::add_row(std::span<const double> values) {
    if (values.size() != n_columns_)
        throw IoError("CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_g17(values[i]);
    }
    text_ += '\n';
}

void CsvBuilder::add_row(std::span<const std::string> cells) {
    if (cells.size() != n_columns_)
        throw IoError("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

} // namespace gpscatter
