#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bq/spectral.hpp"
#include "bq/wannier.hpp"

namespace bq::io {

// FNV-1a over raw bytes: the content hash used for cache keys and manifest references.
std::uint64_t fnv1a(std::span<const unsigned char> bytes);
std::uint64_t fnv1a(const std::string& s);
std::uint64_t hash_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

// Cache directory: $BQ_CACHE_DIR or ./bq_cache, created on demand.
std::string cache_dir();

// Canonical cache file names for artifacts on the shared evaluation grid.
std::string spectrum_cache_path(double b, double a, std::size_t n_eig);
std::string wannier_cache_path(double zeta);

// Advisory lock around cache writes; throws if the lock cannot be taken within ~30 s.
class FileLock {
public:
    explicit FileLock(const std::string& path);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    std::string path_;
    int fd_ = -1;
};

// Spectral cache, magic "BQSPEC1": header {b, a, n_x, n_y, grid bounds, n_eig},
// energies, then fields row-major. Little-endian doubles throughout.
void save_spectrum(const std::string& path, const GridSpectrum& spec);
GridSpectrum load_spectrum(const std::string& path);

// Wannier cache, magic "BQWAN1": both 1D factors (params, grid, packed re/im rows).
void save_wannier(const std::string& path, const WannierBasis2D& basis);
WannierBasis2D load_wannier(const std::string& path);

// Run manifest: full configuration + consumed/produced cache hashes + seed, serialized
// as canonical JSON. The manifest hash stamps every CSV produced by the run.
struct RunManifest {
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> cache_hashes;
    std::uint64_t seed = 0;
    std::string tool_version;

    std::string to_json() const;  // canonical (sorted keys, fixed formatting)
    std::uint64_t hash() const { return fnv1a(to_json()); }
    void write(const std::string& path) const;  // append-only: refuses to truncate
};

// CSV with a header row and a "# manifest=<hex>" comment line; deterministic formatting.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, std::uint64_t manifest_hash,
               int precision = 12);

// Minimal self-contained SVG plotting: polyline chart of several series on shared axes,
// and a value-mapped heatmap. CSV is canonical; these are conveniences.
struct SvgSeries {
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    std::string label;
};
void write_svg_chart(const std::string& path, const std::vector<SvgSeries>& series,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& title);
void write_svg_heatmap(const std::string& path, std::span<const double> values, int nx, int ny,
                       const std::string& title);

}  // namespace bq::io
