// Command-line front end: feature extraction, alignment, F0 remapping,
// synthetic benchmarks, and path verification.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "warp/bench.hpp"
#include "warp/ctw.hpp"
#include "warp/dtw.hpp"
#include "warp/features.hpp"
#include "warp/io.hpp"
#include "warp/path.hpp"
#include "warp/remap.hpp"
#include "warp/wav.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw warp::IoError("cannot open " + path + " for writing");
    out << text;
}

int run_extract(const std::string& input, const std::string& out_file,
                const std::string& format, const std::string& feature, int order,
                int pca_dim, const std::string& f0_out) {
    warp::AudioSignal sig = warp::read_wav_file(input);
    if (sig.sample_rate != 16000) sig = warp::resample_linear(sig, 16000);

    warp::FeatureSequence feat;
    if (feature == "mcep") {
        feat = warp::extract_mcep(sig, order);
    } else if (feature == "stft-pca") {
        const auto spec = warp::stft_mag(sig);
        // Joint-PCA wants a pair; for single-file extraction fit on itself.
        feat = warp::pca_reduce(spec, spec, pca_dim).first;
        feat.hop_seconds = spec.hop_seconds;
        feat.sample_rate = spec.sample_rate;
    } else {
        std::cerr << "--feature must be mcep or stft-pca, got " << feature << "\n";
        return kExitDomain;
    }
    feat.label = input;

    if (format == "bin")
        warp::write_features_bin(out_file, feat);
    else
        warp::write_features_csv(out_file, feat);

    if (!f0_out.empty())
        warp::write_f0_csv(f0_out, warp::f0_contour(sig));

    std::cout << "extracted " << feat.dims() << "x" << feat.frames() << " from "
              << input << " -> " << out_file << "\n";
    return kExitOk;
}

int run_align(const std::string& src_file, const std::string& tgt_file,
              const std::string& method, int b, double lambda, int max_iter,
              double tol, bool no_znorm, const std::string& out_file,
              const std::string& report_file) {
    warp::FeatureSequence x = warp::read_features_auto(src_file);
    warp::FeatureSequence y = warp::read_features_auto(tgt_file);
    if (!no_znorm) {
        x = warp::znorm(x);
        y = warp::znorm(y);
    }

    warp::AlignmentResult result;
    if (method == "dtw") {
        result = warp::dtw_align(x, y);
    } else {
        warp::CtwConfig cfg;
        cfg.init = method == "ctw-dtw" ? warp::CtwInit::dtw : warp::CtwInit::uniform;
        cfg.b = b;
        cfg.lambda = lambda;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        result = warp::ctw_align(x, y, cfg);
    }

    warp::write_path_csv(out_file, result.path);
    if (!report_file.empty())
        write_text(report_file, warp::alignment_report_json(result, out_file) + "\n");
    std::cout << "aligned " << x.frames() << "x" << y.frames() << " frames, cost "
              << result.final_cost << ", path " << result.path.size() << " -> "
              << out_file << "\n";
    return kExitOk;
}

int run_remap(const std::string& src_f0_file, const std::string& tgt_f0_file,
              const std::string& path_file, const std::string& out_file,
              bool log_domain, bool median3) {
    const auto src = warp::read_f0_csv(src_f0_file);
    const auto tgt = warp::read_f0_csv(tgt_f0_file);
    const auto path = warp::read_path_csv(path_file);
    warp::RemapOptions opts;
    opts.log_domain = log_domain;
    opts.median3 = median3;
    warp::write_f0_csv(out_file, warp::remap_f0(src, tgt, path, opts));
    std::cout << "remapped " << tgt.size() << " target frames onto " << src.size()
              << " source frames -> " << out_file << "\n";
    return kExitOk;
}

int run_bench(const std::string& scenario, const std::string& task_name,
              int songs, uint64_t seed, double duration,
              const std::string& out_file, const std::string& plot_csv) {
    const warp::Task task = task_name == "poly" ? warp::Task::mono_to_poly
                                                : warp::Task::mono_to_mono;
    warp::ExperimentConfig cfg;
    cfg.cells = warp::full_grid(scenario, task);
    cfg.n_songs = songs;
    cfg.seed = seed;
    cfg.duration_s = duration;

    const auto results = warp::run_experiment(cfg);
    write_text(out_file, warp::results_to_json(results, cfg) + "\n");
    if (!plot_csv.empty()) write_text(plot_csv, warp::results_to_plot_csv(results));

    for (const auto& r : results)
        std::cout << warp::to_string(r.method) << " " << r.cell.scenario << " r="
                  << r.cell.rate << " s=" << r.cell.shift_semitones
                  << " median_e=" << r.median_e << "\n";
    return kExitOk;
}

int run_verify(const std::string& path_file, int nx, int ny) {
    const auto path = warp::read_path_csv(path_file);
    const auto verdict = warp::validate_path(path, nx, ny);
    if (verdict.ok) {
        std::cout << path_file << ": valid path of length " << path.size() << "\n";
        return kExitOk;
    }
    std::cerr << path_file << ": invalid path: " << verdict.message;
    if (verdict.index >= 0) std::cerr << " at pair " << verdict.index;
    std::cerr << "\n";
    return kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"singing-voice alignment toolkit (DTW/CTW)"};
    app.require_subcommand(1);

    // extract
    std::string in_wav, feat_out, format = "bin", feature = "mcep", f0_out;
    int order = 24, pca_dim = 25;
    auto* extract = app.add_subcommand("extract", "extract features from a WAV file");
    extract->add_option("input", in_wav, "input .wav")->required();
    extract->add_option("--out", feat_out, "output feature file")->required();
    extract->add_option("--format", format, "bin|csv")
        ->check(CLI::IsMember({"bin", "csv"}));
    extract->add_option("--feature", feature, "mcep|stft-pca")
        ->check(CLI::IsMember({"mcep", "stft-pca"}));
    extract->add_option("--order", order, "mel-cepstral order (default 24)");
    extract->add_option("--pca-dim", pca_dim, "PCA dimensions for stft-pca");
    extract->add_option("--f0-out", f0_out, "also write the F0 contour CSV");

    // align
    std::string src_feat, tgt_feat, method, path_out, report;
    int b = 0, max_iter = 30;
    double lambda = -1.0, tol = 1e-4;
    bool no_znorm = false;
    auto* align = app.add_subcommand("align", "align two feature files");
    align->add_option("source", src_feat, "source feature file")->required();
    align->add_option("target", tgt_feat, "target feature file")->required();
    align->add_option("--method", method, "dtw|ctw-uniform|ctw-dtw")
        ->required()
        ->check(CLI::IsMember({"dtw", "ctw-uniform", "ctw-dtw"}));
    align->add_option("--b", b, "CTW embedding dimension (0 = min(d,10))");
    align->add_option("--lambda", lambda, "CCA ridge (negative = auto)");
    align->add_option("--max-iter", max_iter, "CTW iteration cap");
    align->add_option("--tol", tol, "CTW convergence tolerance");
    align->add_flag("--no-znorm", no_znorm, "skip per-dimension z-normalization");
    align->add_option("--out", path_out, "output path CSV")->required();
    align->add_option("--report", report, "JSON diagnostics file");

    // remap
    std::string src_f0, tgt_f0, path_in, f0_remap_out;
    bool log_domain = false, median3 = false;
    auto* remap = app.add_subcommand("remap", "warp a target F0 contour onto source timing");
    remap->add_option("source_f0", src_f0, "source F0 CSV")->required();
    remap->add_option("target_f0", tgt_f0, "target F0 CSV")->required();
    remap->add_option("path", path_in, "warping path CSV")->required();
    remap->add_option("--out", f0_remap_out, "corrected F0 CSV")->required();
    remap->add_flag("--log-domain", log_domain, "average in log-Hz");
    remap->add_flag("--median3", median3, "3-frame median filter");

    // bench
    std::string scenario, task_name = "mono", results_out, plot_csv;
    int songs = 30;
    uint64_t seed = 1;
    double duration = 30.0;
    auto* bench = app.add_subcommand("bench", "run the synthetic alignment benchmark");
    bench->add_option("--scenario", scenario, "linear|nonlinear")
        ->required()
        ->check(CLI::IsMember({"linear", "nonlinear"}));
    bench->add_option("--task", task_name, "mono|poly")
        ->check(CLI::IsMember({"mono", "poly"}));
    bench->add_option("--songs", songs, "songs per cell");
    bench->add_option("--seed", seed, "base seed; all randomness flows from it");
    bench->add_option("--duration", duration, "seconds per song (default 30)");
    bench->add_option("--out", results_out, "results JSON")->required();
    bench->add_option("--plot-csv", plot_csv, "per-cell medians CSV");

    // verify
    std::string verify_path;
    int nx = 0, ny = 0;
    auto* verify = app.add_subcommand("verify", "check a path CSV against (nx, ny)");
    verify->add_option("path", verify_path, "path CSV")->required();
    verify->add_option("--nx", nx, "source frame count")->required();
    verify->add_option("--ny", ny, "target frame count")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n" << app.help();
        return kExitDomain;
    }

    try {
        if (extract->parsed())
            return run_extract(in_wav, feat_out, format, feature, order, pca_dim, f0_out);
        if (align->parsed())
            return run_align(src_feat, tgt_feat, method, b, lambda, max_iter, tol,
                             no_znorm, path_out, report);
        if (remap->parsed())
            return run_remap(src_f0, tgt_f0, path_in, f0_remap_out, log_domain, median3);
        if (bench->parsed())
            return run_bench(scenario, task_name, songs, seed, duration, results_out,
                             plot_csv);
        if (verify->parsed()) return run_verify(verify_path, nx, ny);
    } catch (const warp::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitDomain;
}
