#include "bq/io.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bq::io {
namespace {

void put_bytes(std::ofstream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), std::streamsize(n));
}

void get_bytes(std::ifstream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), std::streamsize(n));
    if (!is) throw std::runtime_error("cache file truncated");
}

void put_u64(std::ofstream& os, std::uint64_t v) { put_bytes(os, &v, 8); }
void put_f64(std::ofstream& os, double v) { put_bytes(os, &v, 8); }

std::uint64_t get_u64(std::ifstream& is) {
    std::uint64_t v;
    get_bytes(is, &v, 8);
    return v;
}

double get_f64(std::ifstream& is) {
    double v;
    get_bytes(is, &v, 8);
    return v;
}

void put_grid1d(std::ofstream& os, const Grid1D& g) {
    put_f64(os, g.lo);
    put_f64(os, g.hi);
    put_u64(os, std::uint64_t(g.n));
}

Grid1D get_grid1d(std::ifstream& is) {
    Grid1D g;
    g.lo = get_f64(is);
    g.hi = get_f64(is);
    g.n = int(get_u64(is));
    return g;
}

void check_magic(std::ifstream& is, const char* magic) {
    char buf[8] = {};
    get_bytes(is, buf, 8);
    if (std::strncmp(buf, magic, 8) != 0)
        throw std::runtime_error(std::string("wrong cache magic, expected ") + magic);
}

void put_magic(std::ofstream& os, const char* magic) {
    char buf[8] = {};
    std::snprintf(buf, sizeof buf, "%s", magic);
    put_bytes(os, buf, 8);
}

}  // namespace

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s) {
    return fnv1a({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot hash missing file " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!is) break;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string cache_dir() {
    const char* env = std::getenv("BQ_CACHE_DIR");
    const std::string dir = env && *env ? env : "bq_cache";
    ::mkdir(dir.c_str(), 0755);  // EEXIST is fine
    return dir;
}

std::string spectrum_cache_path(double b, double a, std::size_t n_eig) {
    std::ostringstream key;
    key.precision(17);
    key << "spec;b=" << b << ";a=" << a << ";n=" << n_eig << ";grid=13.2x11x180";
    return cache_dir() + "/spec_" + hash_hex(fnv1a(key.str())) + ".bqspec";
}

std::string wannier_cache_path(double zeta) {
    std::ostringstream key;
    key.precision(17);
    key << "wan;zeta=" << zeta << ";lattice=13x11x9x9;grid=13.2x11x180";
    return cache_dir() + "/wan_" + hash_hex(fnv1a(key.str())) + ".bqwan";
}

FileLock::FileLock(const std::string& path) : path_(path + ".lock") {
    for (int attempt = 0; attempt < 300; ++attempt) {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ >= 0) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    throw std::runtime_error("could not take lock " + path_ + " within 30 s");
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::close(fd_);
        ::unlink(path_.c_str());
    }
}

void save_spectrum(const std::string& path, const GridSpectrum& spec) {
    FileLock lock(path);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    put_magic(os, "BQSPEC1");
    put_f64(os, spec.b);
    put_f64(os, spec.a);
    put_grid1d(os, spec.grid.gx);
    put_grid1d(os, spec.grid.gy);
    put_u64(os, spec.n_eig());
    put_bytes(os, spec.energies.data(), spec.energies.size() * 8);
    put_bytes(os, spec.fields.data(), spec.fields.size() * 8);
    if (!os) throw std::runtime_error("short write to " + path);
}

GridSpectrum load_spectrum(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("missing spectral cache " + path);
    check_magic(is, "BQSPEC1");
    GridSpectrum spec;
    spec.b = get_f64(is);
    spec.a = get_f64(is);
    spec.grid.gx = get_grid1d(is);
    spec.grid.gy = get_grid1d(is);
    const std::uint64_t n = get_u64(is);
    spec.energies.resize(n);
    get_bytes(is, spec.energies.data(), n * 8);
    spec.fields.resize(n * spec.grid.size());
    get_bytes(is, spec.fields.data(), spec.fields.size() * 8);
    return spec;
}

namespace {

void put_wannier1d(std::ofstream& os, const Wannier1D& w) {
    const auto& p = w.params();
    put_f64(os, p.x0);
    put_f64(os, p.k0);
    put_f64(os, p.zeta);
    put_f64(os, p.pos_offset);
    put_u64(os, std::uint64_t(std::int64_t(p.j_pos_lo)));
    put_u64(os, std::uint64_t(std::int64_t(p.j_pos_hi)));
    put_u64(os, std::uint64_t(std::int64_t(p.j_mom_lo)));
    put_u64(os, std::uint64_t(std::int64_t(p.j_mom_hi)));
    put_grid1d(os, w.grid());
    put_f64(os, w.overlap_condition());
    for (int f = 0; f < w.n_funcs(); ++f) put_bytes(os, w.re(f).data(), w.re(f).size() * 8);
    for (int f = 0; f < w.n_funcs(); ++f) put_bytes(os, w.im(f).data(), w.im(f).size() * 8);
}

Wannier1D get_wannier1d(std::ifstream& is) {
    WannierLatticeParams p;
    p.x0 = get_f64(is);
    p.k0 = get_f64(is);
    p.zeta = get_f64(is);
    p.pos_offset = get_f64(is);
    p.j_pos_lo = int(std::int64_t(get_u64(is)));
    p.j_pos_hi = int(std::int64_t(get_u64(is)));
    p.j_mom_lo = int(std::int64_t(get_u64(is)));
    p.j_mom_hi = int(std::int64_t(get_u64(is)));
    const Grid1D g = get_grid1d(is);
    const double cond = get_f64(is);
    const std::size_t n = std::size_t(p.n_funcs()) * g.n;
    std::vector<double> re(n), im(n);
    get_bytes(is, re.data(), n * 8);
    get_bytes(is, im.data(), n * 8);
    return Wannier1D::from_raw(p, g, std::move(re), std::move(im), cond);
}

}  // namespace

void save_wannier(const std::string& path, const WannierBasis2D& basis) {
    FileLock lock(path);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    put_magic(os, "BQWAN1");
    put_wannier1d(os, basis.bx());
    put_wannier1d(os, basis.by());
    if (!os) throw std::runtime_error("short write to " + path);
}

WannierBasis2D load_wannier(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("missing wannier cache " + path);
    check_magic(is, "BQWAN1");
    Wannier1D bx = get_wannier1d(is);
    Wannier1D by = get_wannier1d(is);
    return WannierBasis2D::build(std::move(bx), std::move(by));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = config;
    j["cache_hashes"] = cache_hashes;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    return j.dump(2);
}

void RunManifest::write(const std::string& path) const {
    // append-only: identical reruns are fine, anything else must not clobber history
    if (std::ifstream prev(path); prev.good()) {
        std::stringstream ss;
        ss << prev.rdbuf();
        if (ss.str() == to_json() + "\n") return;
        throw std::runtime_error("manifest " + path + " exists with different content");
    }
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << to_json() << "\n";
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, std::uint64_t manifest_hash,
               int precision) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# manifest=" << hash_hex(manifest_hash) << "\n" << header << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.*g", precision, row[i]);
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    }
}

namespace {

struct AxisMap {
    double lo, hi, px0, px1;
    double operator()(double v) const {
        const double f = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return px0 + f * (px1 - px0);
    }
};

std::string heat_color(double f) {
    // dark blue -> yellow
    const int r = int(255.0 * std::min(1.0, 2.0 * f));
    const int g = int(255.0 * f);
    const int b = int(80.0 + 120.0 * (1.0 - f));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void write_svg_chart(const std::string& path, const std::vector<SvgSeries>& series,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& title) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    if (xhi < xlo) xlo = xhi = 0.0;
    if (yhi < ylo) ylo = yhi = 0.0;
    const double pad = 0.05 * (yhi - ylo + 1e-12);
    const AxisMap mx{xlo, xhi, 60.0, 760.0};
    const AxisMap my{ylo - pad, yhi + pad, 560.0, 40.0};

    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='800' height='600' "
          "font-family='sans-serif' font-size='12'>\n";
    os << "<rect width='800' height='600' fill='white'/>\n";
    os << "<text x='400' y='20' text-anchor='middle' font-size='14'>" << title << "</text>\n";
    os << "<line x1='60' y1='560' x2='760' y2='560' stroke='black'/>\n";
    os << "<line x1='60' y1='40' x2='60' y2='560' stroke='black'/>\n";
    os << "<text x='400' y='590' text-anchor='middle'>" << x_label << "</text>\n";
    os << "<text x='15' y='300' text-anchor='middle' transform='rotate(-90 15 300)'>" << y_label
       << "</text>\n";
    char buf[64];
    for (int k = 0; k <= 4; ++k) {
        const double xv = xlo + k * (xhi - xlo) / 4.0;
        const double yv = ylo + k * (yhi - ylo) / 4.0;
        std::snprintf(buf, sizeof buf, "%.4g", xv);
        os << "<text x='" << mx(xv) << "' y='575' text-anchor='middle'>" << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.4g", yv);
        os << "<text x='55' y='" << my(yv) + 4 << "' text-anchor='end'>" << buf << "</text>\n";
    }
    int li = 0;
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.2' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", mx(s.x[i]), my(s.y[i]));
            os << buf;
        }
        os << "'/>\n";
        if (!s.label.empty()) {
            os << "<text x='680' y='" << 55 + 16 * li << "' fill='" << s.color << "'>" << s.label
               << "</text>\n";
            ++li;
        }
    }
    os << "</svg>\n";
}

void write_svg_heatmap(const std::string& path, std::span<const double> values, int nx, int ny,
                       const std::string& title) {
    if (nx <= 0 || ny <= 0 || values.size() != std::size_t(nx) * ny)
        throw std::invalid_argument("heatmap dimensions do not match the payload");
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    const double cw = 720.0 / nx, ch = 520.0 / ny;

    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='800' height='600' "
          "font-family='sans-serif' font-size='12'>\n";
    os << "<rect width='800' height='600' fill='white'/>\n";
    os << "<text x='400' y='20' text-anchor='middle' font-size='14'>" << title << "</text>\n";
    char buf[160];
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const double f = vmax > 0.0 ? values[std::size_t(ix) * ny + iy] / vmax : 0.0;
            std::snprintf(buf, sizeof buf,
                          "<rect x='%.1f' y='%.1f' width='%.2f' height='%.2f' fill='%s'/>\n",
                          40.0 + ix * cw, 560.0 - (iy + 1) * ch, cw + 0.5, ch + 0.5,
                          heat_color(f).c_str());
            os << buf;
        }
    os << "</svg>\n";
}

}  // namespace bq::io
