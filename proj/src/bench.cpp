#include "warp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "warp/ctw.hpp"
#include "warp/dtw.hpp"
#include "warp/features.hpp"
#include "warp/path.hpp"

namespace warp {

std::string to_string(Task t) {
    return t == Task::mono_to_mono ? "mono_to_mono" : "mono_to_poly";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::dtw: return "dtw";
        case Method::ctw_uniform: return "ctw_uniform";
        default: return "ctw_dtw";
    }
}

Method method_from_string(const std::string& s) {
    if (s == "dtw") return Method::dtw;
    if (s == "ctw-uniform" || s == "ctw_uniform") return Method::ctw_uniform;
    if (s == "ctw-dtw" || s == "ctw_dtw") return Method::ctw_dtw;
    throw std::invalid_argument("unknown method: " + s);
}

void DistortionSpec::validate() const {
    if (rates.size() != 1 && rates.size() != 5)
        throw std::invalid_argument("distortion needs 1 (linear) or 5 chunk rates");
    for (double r : rates)
        if (r < 0.5 || r > 2.0)
            throw std::invalid_argument("stretch rate outside [0.5, 2.0]");
    if (shift_semitones < -12 || shift_semitones > 12)
        throw std::invalid_argument("pitch shift outside [-12, 12] semitones");
}

WarpingPath gt_path_from_warp(const TimeWarp& warp, int n_x, int n_y,
                              double hop_seconds) {
    if (n_x < 1 || n_y < 1) throw std::invalid_argument("need n_x, n_y >= 1");
    for (std::size_t k = 1; k < warp.u_break.size(); ++k)
        if (warp.u_break[k] < warp.u_break[k - 1] ||
            warp.t_break[k] <= warp.t_break[k - 1])
            throw std::invalid_argument("warp function is not monotone");

    std::vector<int> anchor(std::size_t(n_x), 0);
    for (int i = 0; i < n_x; ++i) {
        const double j = warp(double(i) * hop_seconds) / hop_seconds;
        anchor[std::size_t(i)] = std::clamp(int(std::lround(j)), 0, n_y - 1);
    }
    anchor[0] = 0;
    anchor[std::size_t(n_x - 1)] = n_y - 1;
    for (int i = 1; i < n_x; ++i)
        anchor[std::size_t(i)] = std::max(anchor[std::size_t(i)], anchor[std::size_t(i - 1)]);

    WarpingPath path;
    path.pairs.emplace_back(0, 0);
    for (int i = 1; i < n_x; ++i) {
        int j = path.pairs.back().second;
        const int jt = anchor[std::size_t(i)];
        // Fill a multi-column jump with vertical steps, then step diagonally.
        while (j + 1 < jt) {
            ++j;
            path.pairs.emplace_back(i - 1, j);
        }
        path.pairs.emplace_back(i, jt);
    }
    // A trailing column gap can remain when the warp overshoots the last frame.
    while (path.pairs.back().second < n_y - 1)
        path.pairs.emplace_back(n_x - 1, path.pairs.back().second + 1);
    return path;
}

namespace {

void check_extents(const WarpingPath& a, const WarpingPath& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("alignment_error: empty path");
    if (a.pairs.front() != b.pairs.front() || a.pairs.back() != b.pairs.back())
        throw std::invalid_argument("alignment_error: paths cover different extents");
}

// Sum over points of a of the distance to the nearest point of b.
// b is monotone, so i+j is strictly increasing along it; a binary search on
// that sum plus an outward scan bounded by |dsum|/sqrt(2) <= dist is exact.
double directed_sum(const WarpingPath& a, const WarpingPath& b) {
    std::vector<int> sums(b.size());
    for (std::size_t k = 0; k < b.size(); ++k)
        sums[k] = b.pairs[k].first + b.pairs[k].second;

    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(a.size()); ++k) {
        const auto [pi, pj] = a.pairs[std::size_t(k)];
        const int psum = pi + pj;
        const auto it = std::lower_bound(sums.begin(), sums.end(), psum);
        auto dist2 = [&](std::ptrdiff_t idx) {
            const double di = b.pairs[std::size_t(idx)].first - pi;
            const double dj = b.pairs[std::size_t(idx)].second - pj;
            return di * di + dj * dj;
        };
        double best = std::numeric_limits<double>::infinity();
        const auto start = it - sums.begin();
        for (std::ptrdiff_t r = start; r < std::ptrdiff_t(b.size()); ++r) {
            const double lb = double(sums[std::size_t(r)] - psum);
            if (lb * lb / 2.0 >= best) break;
            best = std::min(best, dist2(r));
        }
        for (std::ptrdiff_t l = start - 1; l >= 0; --l) {
            const double lb = double(psum - sums[std::size_t(l)]);
            if (lb * lb / 2.0 >= best) break;
            best = std::min(best, dist2(l));
        }
        total += std::sqrt(best);
    }
    return total;
}

}  // namespace

double alignment_error(const WarpingPath& est, const WarpingPath& gt) {
    check_extents(est, gt);
    return (directed_sum(est, gt) + directed_sum(gt, est)) /
           double(est.size() + gt.size());
}

namespace serial {

double alignment_error(const WarpingPath& est, const WarpingPath& gt) {
    check_extents(est, gt);
    auto directed = [](const WarpingPath& a, const WarpingPath& b) {
        double total = 0.0;
        for (const auto& [pi, pj] : a.pairs) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [qi, qj] : b.pairs) {
                const double di = qi - pi, dj = qj - pj;
                best = std::min(best, di * di + dj * dj);
            }
            total += std::sqrt(best);
        }
        return total;
    };
    return (directed(est, gt) + directed(gt, est)) / double(est.size() + gt.size());
}

}  // namespace serial

BenchmarkCase make_case(const DistortionSpec& spec, double duration_s,
                        int sample_rate, bool apply_znorm) {
    spec.validate();

    BenchmarkCase c;
    c.spec = spec;
    const SongControls controls = synth_song_controls(spec.seed, duration_s);
    const TimeWarp warp = make_warp(duration_s, spec.rates);

    RenderOptions src_opts;
    src_opts.sample_rate = sample_rate;
    const AudioSignal source = render_song(controls, src_opts);

    RenderOptions tgt_opts;
    tgt_opts.sample_rate = sample_rate;
    tgt_opts.shift_semitones = double(spec.shift_semitones);
    tgt_opts.warp = &warp;
    tgt_opts.accompaniment = spec.task == Task::mono_to_poly;
    tgt_opts.noise_seed = spec.seed;
    const AudioSignal target = render_song(controls, tgt_opts);

    c.source_features = extract_mcep(source);
    c.target_features = extract_mcep(target);
    if (apply_znorm) {
        c.source_features = znorm(c.source_features);
        c.target_features = znorm(c.target_features);
    }

    const double hop = c.source_features.hop_seconds;
    const int n_x = int(c.source_features.frames());
    const int n_y = int(c.target_features.frames());
    c.gt_path = gt_path_from_warp(warp, n_x, n_y, hop);

    // F0 from the control curves (the generator is its own oracle here).
    const double shift = std::pow(2.0, spec.shift_semitones / 12.0);
    c.source_f0.hop_seconds = hop;
    c.source_f0.f0_hz.resize(std::size_t(n_x));
    for (int i = 0; i < n_x; ++i)
        c.source_f0.f0_hz[std::size_t(i)] = controls.f0_at(i * hop);
    c.target_f0.hop_seconds = hop;
    c.target_f0.f0_hz.resize(std::size_t(n_y));
    for (int j = 0; j < n_y; ++j)
        c.target_f0.f0_hz[std::size_t(j)] = controls.f0_at(warp.inverse(j * hop)) * shift;
    return c;
}

std::vector<ExperimentCell> full_grid(const std::string& scenario, Task task) {
    static constexpr double kRates[] = {0.8, 0.9, 1.0, 1.1, 1.2};
    static constexpr int kShifts[] = {-2, -1, 0, 1, 2};

    std::vector<ExperimentCell> cells;
    if (scenario == "linear") {
        for (double r : kRates)
            for (int s : kShifts) cells.push_back({scenario, task, r, s});
    } else if (scenario == "nonlinear") {
        for (int s : kShifts) cells.push_back({scenario, task, 1.0, s});
    } else {
        throw std::invalid_argument("scenario must be linear or nonlinear");
    }
    return cells;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double interquartile_range(std::vector<double> v) {
    if (v.size() < 2) return 0.0;
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * double(v.size() - 1);
        const auto lo = std::size_t(pos);
        const double frac = pos - double(lo);
        return lo + 1 < v.size() ? v[lo] + frac * (v[lo + 1] - v[lo]) : v[lo];
    };
    return quantile(0.75) - quantile(0.25);
}

namespace {

uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> draw_chunk_rates(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.8, 1.2);
    std::vector<double> rates(5);
    for (double& r : rates) r = dist(rng);
    return rates;
}

}  // namespace

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.cells.empty()) throw std::invalid_argument("experiment grid is empty");
    if (cfg.n_songs < 1) throw std::invalid_argument("need n_songs >= 1");

    const auto n_cells = cfg.cells.size();
    const auto n_methods = cfg.methods.size();

    std::vector<CellResult> results(n_cells * n_methods);
    for (std::size_t c = 0; c < n_cells; ++c) {
        for (std::size_t m = 0; m < n_methods; ++m) {
            auto& r = results[c * n_methods + m];
            r.method = cfg.methods[m];
            r.cell = cfg.cells[c];
            r.errors.assign(std::size_t(cfg.n_songs),
                            std::numeric_limits<double>::quiet_NaN());
            r.failures.assign(std::size_t(cfg.n_songs), "");
            r.seeds.resize(std::size_t(cfg.n_songs));
            for (int s = 0; s < cfg.n_songs; ++s)
                r.seeds[std::size_t(s)] = cfg.seed + uint64_t(s);
        }
    }

    const std::ptrdiff_t jobs = std::ptrdiff_t(n_cells) * cfg.n_songs;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t job = 0; job < jobs; ++job) {
        const auto c = std::size_t(job) / std::size_t(cfg.n_songs);
        const int song = int(std::size_t(job) % std::size_t(cfg.n_songs));
        const ExperimentCell& cell = cfg.cells[c];

        DistortionSpec spec;
        spec.seed = cfg.seed + uint64_t(song);
        spec.shift_semitones = cell.shift_semitones;
        spec.task = cell.task;
        spec.rates = cell.scenario == "nonlinear"
                         ? draw_chunk_rates(mix_seed(cfg.seed, uint64_t(song)))
                         : std::vector<double>{cell.rate};

        try {
            const BenchmarkCase bc =
                make_case(spec, cfg.duration_s, cfg.sample_rate, cfg.apply_znorm);

            for (std::size_t m = 0; m < n_methods; ++m) {
                auto& out = results[c * n_methods + m];
                try {
                    WarpingPath path;
                    if (cfg.methods[m] == Method::dtw) {
                        path = dtw_align(bc.source_features, bc.target_features).path;
                    } else {
                        CtwConfig cc;
                        cc.init = cfg.methods[m] == Method::ctw_dtw ? CtwInit::dtw
                                                                    : CtwInit::uniform;
                        cc.b = cfg.ctw_b;
                        cc.lambda = cfg.ctw_lambda;
                        cc.max_iter = cfg.ctw_max_iter;
                        cc.tol = cfg.ctw_tol;
                        path = ctw_align(bc.source_features, bc.target_features, cc).path;
                    }
                    out.errors[std::size_t(song)] = alignment_error(path, bc.gt_path);
                } catch (const std::exception& e) {
                    out.failures[std::size_t(song)] = e.what();
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t m = 0; m < n_methods; ++m)
                results[c * n_methods + m].failures[std::size_t(song)] = e.what();
        }
    }

    for (auto& r : results) {
        std::vector<double> ok;
        std::vector<std::string> fails;
        for (std::size_t s = 0; s < r.errors.size(); ++s) {
            if (r.failures[s].empty() && std::isfinite(r.errors[s]))
                ok.push_back(r.errors[s]);
            else if (!r.failures[s].empty())
                fails.push_back("song " + std::to_string(s) + ": " + r.failures[s]);
        }
        r.errors = std::move(ok);
        r.failures = std::move(fails);
        r.median_e = median(r.errors);
        r.iqr_e = interquartile_range(r.errors);
    }
    return results;
}

}  // namespace warp
