// bq: billiard quantum phase-space laboratory.
//
// Subcommands: solve, verify, wannier, fig2, fig3, fig4, fig5. Every figure command
// writes CSVs stamped with the hash of a JSON run manifest, plus a convenience SVG.
// Spectral and Wannier caches live in $BQ_CACHE_DIR (default ./bq_cache).

#include <sys/stat.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bq/berry.hpp"
#include "bq/defaults.hpp"
#include "bq/dynamics.hpp"
#include "bq/geometry.hpp"
#include "bq/io.hpp"
#include "bq/kernels.hpp"
#include "bq/oracles.hpp"
#include "bq/ripple.hpp"
#include "bq/square.hpp"
#include "bq/wannier.hpp"

namespace {

constexpr const char* kVersion = "bq 1.0.0";

using bq::io::RunManifest;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Flat key=value config file; CLI flags override afterwards.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> cfg;
    if (path.empty()) return cfg;
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot read " + path);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "expected key=value, got: " + line);
        cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return cfg;
}

void apply_config(const std::map<std::string, std::string>& cfg,
                  std::map<std::string, double*> keys) {
    for (const auto& [k, v] : cfg) {
        const auto it = keys.find(k);
        if (it == keys.end()) throw CLI::ValidationError("--config", "unknown key " + k);
        *it->second = std::stod(v);
    }
}

using bq::io::spectrum_cache_path;
using bq::io::wannier_cache_path;

// Load-or-build a spectral cache on the shared phase-space grid. a = 0 takes the
// analytic square path; refuses to clobber a mismatched file unless overwrite is set.
bq::GridSpectrum ensure_spectrum(double b, double a, std::size_t n_eig, bool certify,
                                 bool overwrite, RunManifest* manifest) {
    const std::string path = spectrum_cache_path(b, a, n_eig);
    const bq::Grid2D grid = bq::defaults::phase_grid();
    if (!overwrite) {
        try {
            bq::GridSpectrum spec = bq::io::load_spectrum(path);
            if (spec.b == b && spec.a == a && spec.n_eig() == n_eig) {
                std::printf("cache hit: %s\n", path.c_str());
                if (manifest)
                    manifest->cache_hashes[path] = bq::io::hash_hex(bq::io::hash_file(path));
                return spec;
            }
            throw std::runtime_error("cache collision at " + path +
                                     " (different config); pass --overwrite to replace");
        } catch (const std::runtime_error& e) {
            if (std::string(e.what()).find("collision") != std::string::npos) throw;
            // missing or unreadable: rebuild below
        }
    }
    bq::GridSpectrum spec;
    if (a == 0.0) {
        spec = bq::SquareSpectrum::solve(2.0 * b, -b, 0.0, n_eig).sample(grid, n_eig);
        spec.b = b;
        spec.a = 0.0;
    } else {
        auto geom = bq::BilliardGeometry::build(b, a, bq::defaults::kGridN, bq::defaults::kGridN);
        bq::RippleSpectrum::Options opt;
        opt.n_eig = n_eig;
        opt.cap = n_eig;
        opt.certify = certify;
        auto rs = bq::RippleSpectrum::solve(geom, opt);
        if (certify) {
            const auto& c = *rs.certificate();
            std::printf("certificate: basis %dx%d vs %dx%d, level %zu rel shift %.2e (%s)\n",
                        c.basis_m, c.basis_n, c.refined_m, c.refined_n, c.level, c.rel_shift,
                        c.passed ? "ok" : "FAILED");
            if (!c.passed) throw std::runtime_error("refinement certificate failed");
        }
        spec = rs.sample(grid, n_eig);
    }
    bq::io::save_spectrum(path, spec);
    std::printf("wrote %s\n", path.c_str());
    if (manifest) manifest->cache_hashes[path] = bq::io::hash_hex(bq::io::hash_file(path));
    return spec;
}

bq::WannierBasis2D ensure_wannier(double zeta, RunManifest* manifest) {
    const std::string path = wannier_cache_path(zeta);
    try {
        auto basis = bq::io::load_wannier(path);
        std::printf("cache hit: %s\n", path.c_str());
        if (manifest) manifest->cache_hashes[path] = bq::io::hash_hex(bq::io::hash_file(path));
        return basis;
    } catch (const std::runtime_error&) {
    }
    auto basis = bq::defaults::basis(zeta);
    bq::io::save_wannier(path, basis);
    std::printf("wrote %s\n", path.c_str());
    if (manifest) manifest->cache_hashes[path] = bq::io::hash_hex(bq::io::hash_file(path));
    return basis;
}

void ensure_outdir(const std::string& dir) { ::mkdir(dir.c_str(), 0755); }

int run_solve(double b, double a, std::size_t n_eig, bool certify, bool overwrite) {
    RunManifest m;
    m.tool_version = kVersion;
    m.config = {{"b", fmt(b)}, {"a", fmt(a)}, {"n_eig", fmt(double(n_eig))}};
    auto spec = ensure_spectrum(b, a, n_eig, certify, overwrite, &m);
    auto geom = bq::BilliardGeometry::build(b, a, bq::defaults::kGridN, bq::defaults::kGridN);
    auto report = bq::verify_spectrum(spec, geom);
    std::printf("%s\n", report.summary().c_str());
    return report.ok ? 0 : 1;
}

int run_verify(double b, double a, std::size_t n_eig) {
    const std::string path = spectrum_cache_path(b, a, n_eig);
    auto spec = bq::io::load_spectrum(path);
    auto geom = bq::BilliardGeometry::build(b, a, bq::defaults::kGridN, bq::defaults::kGridN);
    auto report = bq::verify_spectrum(spec, geom);
    std::printf("cache %s (hash %s)\n%s\n", path.c_str(),
                bq::io::hash_hex(bq::io::hash_file(path)).c_str(), report.summary().c_str());
    return report.ok ? 0 : 1;
}

int run_wannier(double zeta) {
    RunManifest m;
    m.tool_version = kVersion;
    m.config = {{"zeta", fmt(zeta)}};
    auto basis = ensure_wannier(zeta, &m);
    std::printf("N = %zu cells, gram residuals %.3e / %.3e, frame conditions %.3e / %.3e\n",
                basis.size(), basis.bx().gram_residual(), basis.by().gram_residual(),
                basis.bx().overlap_condition(), basis.by().overlap_condition());
    for (const auto& w : basis.bx().warnings()) std::printf("x-basis: %s\n", w.c_str());
    for (const auto& w : basis.by().warnings()) std::printf("y-basis: %s\n", w.c_str());
    return 0;
}

int run_fig2(int level, const std::string& out) {
    ensure_outdir(out);
    // 1D oscillator lattice wide enough for the level-100 orbit (radius ~5.7 cells)
    bq::WannierLatticeParams lat{1.0, bq::kTwoPi, bq::defaults::kZeta, 0.0, -8, 8, -8, 8};
    const bq::Grid1D grid{-9.6, 9.6, 768};
    auto basis = bq::Wannier1D::build(lat, grid);

    bq::HarmonicOscillatorSpec spec{level, grid};
    const auto psi_r = bq::ho_eigenstate(spec);
    std::vector<std::complex<double>> psi(psi_r.begin(), psi_r.end());
    const auto dist = bq::project_1d(basis, psi);

    RunManifest m;
    m.tool_version = kVersion;
    m.config = {{"level", fmt(level)},
                {"potential", fmt(bq::kHoPotential)},
                {"circle_radius_cells", fmt(bq::ho_circle_radius_cells(level))},
                {"grid", "[-9.6,9.6]x768"},
                {"lattice", "jx=[-8,8],jk=[-8,8]"}};
    m.write(out + "/fig2_manifest.json");

    const double r0 = bq::ho_circle_radius_cells(level);
    double ring = 0.0;
    std::vector<std::vector<double>> rows;
    std::vector<double> heat(17 * 17, 0.0);
    const int nm = lat.n_mom();
    for (int jx = lat.j_pos_lo; jx <= lat.j_pos_hi; ++jx)
        for (int jk = lat.j_mom_lo; jk <= lat.j_mom_hi; ++jk) {
            const double p = dist.p[std::size_t(basis.index(jx, jk))];
            rows.push_back({double(jx), double(jk), p});
            heat[std::size_t(jx - lat.j_pos_lo) * nm + (jk - lat.j_mom_lo)] = p;
            if (std::abs(std::hypot(jx, jk) - r0) <= 2.0) ring += p;
        }
    bq::io::write_csv(out + "/fig2.csv", "j_x,j_k,p", rows, m.hash());
    bq::io::write_svg_heatmap(out + "/fig2.svg", heat, 17, 17,
                              "oscillator level " + std::to_string(level) + " in phase space");
    std::printf("S_w = %.4f, captured = %.4f, mass within 2 cells of r=%.2f: %.4f\n",
                dist.entropy(), dist.captured, r0, ring);
    return 0;
}

struct SeriesOutputs {
    bq::EntropyTimeSeries series;
    bq::PlateauStats plateau;
};

int run_fig3(double a, std::size_t n_eig, const std::string& out, bool overwrite) {
    ensure_outdir(out);
    RunManifest m;
    m.tool_version = kVersion;
    m.config = {{"b", fmt(bq::defaults::kB)},      {"a", fmt(a)},
                {"n_eig", fmt(double(n_eig))},     {"sigma", "1"},
                {"kx_square", fmt(bq::defaults::kB)}, {"kx_ripple", "6.05"},
                {"samples", "400"},                {"window", "[5T,20T]"}};

    const double b = bq::defaults::kB;
    auto basis = ensure_wannier(bq::defaults::kZeta, &m);
    auto spec_sq = ensure_spectrum(b, 0.0, n_eig, false, overwrite, &m);
    auto spec_rp = ensure_spectrum(b, a, n_eig, false, overwrite, &m);

    // Fig. 3 square billiard: side b centered on the packet, not the a=0 limit
    const auto packet_sq = bq::defaults::square_packet();
    const auto packet_rp = bq::defaults::ripple_packet();
    auto square = bq::SquareSpectrum::solve(b, packet_sq.xc - b / 2.0, packet_sq.yc - b / 2.0,
                                            n_eig);
    auto ci = bq::make_coefficients(square.expand(packet_sq.field()), "square");
    auto cc = bq::expand_on_grid(spec_rp, packet_rp);
    std::printf("expansion weights: square %.6f, ripple %.6f\n", ci.weight, cc.weight);

    auto w_sq = bq::OverlapMatrix::build(basis, square.sample(basis.grid(), n_eig));
    auto w_rp = bq::OverlapMatrix::build(basis, spec_rp);

    const double t_sq = bq::characteristic_time(b, packet_sq.kx);
    const double t_rp = bq::characteristic_time(2.0 * b, packet_rp.kx);
    const auto times_sq = bq::sample_times(20.0 * t_sq);
    const auto times_rp = bq::sample_times(20.0 * t_rp);

    std::map<char, SeriesOutputs> cases;
    cases['a'] = {bq::entropy_series(w_sq, ci, square.energies(), times_sq, t_sq), {}};
    cases['b'] = {bq::entropy_series(w_sq, ci, spec_rp.energies, times_sq, t_sq), {}};
    cases['c'] = {bq::entropy_series(w_rp, cc, square.energies(), times_rp, t_rp), {}};
    cases['d'] = {bq::entropy_series(w_rp, cc, spec_rp.energies, times_rp, t_rp), {}};

    m.write(out + "/fig3_manifest.json");
    std::vector<bq::io::SvgSeries> chart;
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
    std::vector<std::vector<double>> summary;
    int ci_idx = 0;
    for (auto& [label, c] : cases) {
        const double T = c.series.characteristic_time;
        c.plateau = bq::fluctuation_metric(c.series, 5.0 * T, 20.0 * T);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < c.series.t.size(); ++i)
            rows.push_back({c.series.t[i], c.series.s[i], c.series.captured[i],
                            double(c.series.flag[i])});
        bq::io::write_csv(out + "/fig3_case_" + label + ".csv", "t,s_w,captured,flag", rows,
                          m.hash());
        chart.push_back({c.series.t, c.series.s, colors[ci_idx], std::string("case ") + label});
        const double trev = label == 'a' || label == 'c' ? 2.0 * b * b / M_PI : 0.0;
        double depth = 0.0;
        if (trev > 0.0) {
            const auto r = bq::revival_metric(c.series, trev);
            depth = r.plateau_defined ? r.depth : 0.0;
        }
        summary.push_back({double(label - 'a'), T, c.plateau.mean, c.plateau.stdev, depth});
        std::printf("case %c: plateau %.4f +- %.4f, revival depth %.3f\n", label,
                    c.plateau.mean, c.plateau.stdev, depth);
        ++ci_idx;
    }
    bq::io::write_csv(out + "/fig3_summary.csv", "case,T,plateau_mean,plateau_std,revival_depth",
                      summary, m.hash());
    bq::io::write_svg_chart(out + "/fig3.svg", chart, "t", "S_w", "entropy relaxation, four hybrids");
    return 0;
}

int run_fig4(std::uint64_t seed, const std::string& out, bool overwrite) {
    ensure_outdir(out);
    RunManifest m;
    m.tool_version = kVersion;
    m.config = {{"b", fmt(bq::defaults::kB)},
                {"a", fmt(bq::defaults::kA)},
                {"levels", "1000,857"},
                {"slice", "jy=6,jky=0"}};
    m.seed = seed;

    auto basis = ensure_wannier(bq::defaults::kZeta, &m);
    auto spec = ensure_spectrum(bq::defaults::kB, bq::defaults::kA, bq::defaults::kNeig, false,
                                overwrite, &m);
    auto geom = bq::BilliardGeometry::build(bq::defaults::kB, bq::defaults::kA,
                                            bq::defaults::kGridN, bq::defaults::kGridN);
    m.write(out + "/fig4_manifest.json");

    const bq::Grid2D g = basis.grid();
    bq::GridField f;
    f.grid = g;
    f.values.resize(g.size());

    struct Panel {
        std::string name;
        bq::GridField state;
    };
    std::vector<Panel> panels;
    for (std::size_t level : {std::size_t(1000), std::size_t(857)}) {
        auto phi = spec.field(level - 1);
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = phi[i];
        panels.push_back({"eigenstate_" + std::to_string(level), f});
    }
    bq::BerryEnsembleSpec bs{std::sqrt(spec.energies[999]), 128, bq::sub_seed(seed, 1000)};
    panels.insert(panels.begin() + 1, {"berry_k1000", bq::sample_berry_state(bs, geom, g)});

    std::vector<std::vector<double>> svals;
    for (const auto& p : panels) {
        std::vector<double> dens(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) dens[i] = std::norm(p.state.values[i]);
        bq::io::write_svg_heatmap(out + "/fig4_" + p.name + "_position.svg", dens, g.gx.n, g.gy.n,
                                  p.name + " |psi|^2");
        const auto dist = bq::project(basis, p.state);
        // slice through the center cells: jy at the packet height, jky = 0
        std::vector<std::vector<double>> rows;
        std::vector<double> heat;
        for (int jx = -6; jx <= 6; ++jx)
            for (int jkx = -4; jkx <= 4; ++jkx) {
                const double v = dist.p[basis.flat_index({jx, 6, jkx, 0})];
                rows.push_back({double(jx), double(jkx), v});
                heat.push_back(v);
            }
        bq::io::write_csv(out + "/fig4_" + p.name + "_phase.csv", "j_x,j_kx,p", rows, m.hash());
        bq::io::write_svg_heatmap(out + "/fig4_" + p.name + "_phase.svg", heat, 13, 9,
                                  p.name + " phase-space slice");
        svals.push_back({double(svals.size()), dist.entropy(), dist.captured});
        std::printf("%s: S_w = %.4f, captured = %.4f\n", p.name.c_str(), dist.entropy(),
                    dist.captured);
    }
    bq::io::write_csv(out + "/fig4_entropies.csv", "panel,s_w,captured", svals, m.hash());
    return 0;
}

int run_fig5(const std::string& ratios_csv, std::size_t lo, std::size_t hi, std::uint64_t seed,
             const std::string& out, bool overwrite) {
    ensure_outdir(out);
    std::vector<double> ratios;
    std::stringstream ss(ratios_csv);
    for (std::string tok; std::getline(ss, tok, ',');) ratios.push_back(std::stod(tok));

    RunManifest m;
    m.tool_version = kVersion;
    m.seed = seed;
    m.config = {{"b", fmt(bq::defaults::kB)},
                {"ratios", ratios_csv},
                {"levels", fmt(double(lo)) + ".." + fmt(double(hi))},
                {"scar_threshold", fmt(bq::kScarThresholdDefault)},
                {"window", "30"}};

    auto basis = ensure_wannier(bq::defaults::kZeta, &m);
    // reuse the standard-depth cache whenever it suffices
    const std::size_t n_eig = std::max(bq::defaults::kNeig, hi + 10);

    std::vector<std::vector<double>> fluct_rows;
    std::vector<bq::io::SvgSeries> chart;
    bool manifest_written = false;
    for (double r : ratios) {
        const double a = r * bq::defaults::kB;
        auto spec = ensure_spectrum(bq::defaults::kB, a, n_eig, false, overwrite, &m);
        auto geom = bq::BilliardGeometry::build(bq::defaults::kB, a, bq::defaults::kGridN,
                                                bq::defaults::kGridN);
        bq::BerryEnsembleSpec tmpl{1.0, 128, seed};
        auto es = bq::entropy_spectrum(spec, geom, basis, lo, hi, tmpl);
        const double frac = bq::scar_fraction(es);
        const double fl = bq::entropy_fluctuation(es);
        fluct_rows.push_back({r, fl, frac});

        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < es.entries.size(); ++i) {
            const auto& e = es.entries[i];
            rows.push_back({double(e.level), e.energy, e.s_eig, e.s_berry, es.smoothed[i],
                            double(es.scar_flag[i]), double(e.truncated)});
        }
        char name[64];
        std::snprintf(name, sizeof name, "%s/fig5_ratio_%.4g.csv", out.c_str(), r);
        if (!manifest_written) {
            m.write(out + "/fig5_manifest.json");
            manifest_written = true;
        }
        bq::io::write_csv(name, "level,energy,s_eig,s_berry,s_smoothed,scar,truncated", rows,
                          m.hash());
        std::printf("a/b = %.4g: fluctuation %.4f, scar fraction %.3f\n", r, fl, frac);
    }
    std::vector<double> xs, ys;
    for (const auto& row : fluct_rows) {
        xs.push_back(row[0]);
        ys.push_back(row[1]);
    }
    chart.push_back({xs, ys, "#1f77b4", "mean |S - <S>_30|"});
    bq::io::write_csv(out + "/fig5_fluctuation.csv", "a_over_b,mean_abs_dev,scar_fraction",
                      fluct_rows, m.hash());
    bq::io::write_svg_chart(out + "/fig5_fluctuation.svg", chart, "a/b", "fluctuation",
                            "entropy fluctuation vs chaoticity");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " - quantum billiard phase-space entropy toolkit"};
    app.require_subcommand(1);

    std::string config_path, out = "out", ratios = "0.01,0.05,0.1,0.15,0.2";
    double b = bq::defaults::kB, a = bq::defaults::kA, zeta = bq::defaults::kZeta;
    std::size_t n_eig = bq::defaults::kNeig, lo = 1, hi = 1200;
    int level = 100;
    std::uint64_t seed = 1;
    bool certify = false, overwrite = false;

    app.add_option("--config", config_path, "flat key=value config file");
    app.add_flag("--overwrite", overwrite, "replace mismatched caches");

    auto* solve = app.add_subcommand("solve", "solve a billiard spectrum into the cache");
    solve->add_option("--b", b);
    solve->add_option("--a", a);
    solve->add_option("--n-eig", n_eig);
    solve->add_flag("--certify", certify, "re-solve with a refined basis and compare");

    auto* verify = app.add_subcommand("verify", "audit a cached spectrum");
    verify->add_option("--b", b);
    verify->add_option("--a", a);
    verify->add_option("--n-eig", n_eig);

    auto* wannier = app.add_subcommand("wannier", "build the Planck-cell basis cache");
    wannier->add_option("--zeta", zeta);

    auto* fig2 = app.add_subcommand("fig2", "oscillator phase-space demo");
    fig2->add_option("--level", level);
    fig2->add_option("--out", out);

    auto* fig3 = app.add_subcommand("fig3", "entropy relaxation for the four hybrids");
    fig3->add_option("--a", a, "ripple amplitude (0.55 per the figure; 1.1 for the fully chaotic study)");
    fig3->add_option("--n-eig", n_eig);
    fig3->add_option("--out", out);

    auto* fig4 = app.add_subcommand("fig4", "three-state comparison panels");
    fig4->add_option("--seed", seed);
    fig4->add_option("--out", out);

    auto* fig5 = app.add_subcommand("fig5", "entropy spectra and fluctuation curve");
    fig5->add_option("--ratios", ratios);
    fig5->add_option("--lo", lo);
    fig5->add_option("--hi", hi);
    fig5->add_option("--seed", seed);
    fig5->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = read_config(config_path);
        double n_eig_d = double(n_eig), lo_d = double(lo), hi_d = double(hi),
               seed_d = double(seed), level_d = double(level);
        double b_d = b, a_d = a, zeta_d = zeta;
        apply_config(cfg, {{"b", &b_d},
                           {"a", &a_d},
                           {"zeta", &zeta_d},
                           {"n_eig", &n_eig_d},
                           {"lo", &lo_d},
                           {"hi", &hi_d},
                           {"seed", &seed_d},
                           {"level", &level_d}});
        // flags win over the file: reapply only when the flag was actually given
        if (!solve->count("--b") && !verify->count("--b")) b = b_d;
        if (!solve->count("--a") && !verify->count("--a") && !fig3->count("--a")) a = a_d;
        if (!wannier->count("--zeta")) zeta = zeta_d;
        if (!solve->count("--n-eig") && !fig3->count("--n-eig")) n_eig = std::size_t(n_eig_d);
        if (!fig5->count("--lo")) lo = std::size_t(lo_d);
        if (!fig5->count("--hi")) hi = std::size_t(hi_d);
        if (!fig4->count("--seed") && !fig5->count("--seed")) seed = std::uint64_t(seed_d);
        if (!fig2->count("--level")) level = int(level_d);

        std::printf("kernels: %s\n", bq::kern::active_name().c_str());
        if (solve->parsed()) return run_solve(b, a, n_eig, certify, overwrite);
        if (verify->parsed()) return run_verify(b, a, n_eig);
        if (wannier->parsed()) return run_wannier(zeta);
        if (fig2->parsed()) return run_fig2(level, out);
        if (fig3->parsed()) return run_fig3(a, n_eig, out, overwrite);
        if (fig4->parsed()) return run_fig4(seed, out, overwrite);
        if (fig5->parsed()) return run_fig5(ratios, lo, hi, seed, out, overwrite);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
