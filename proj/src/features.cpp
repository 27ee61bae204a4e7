#include "warp/features.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace warp {
namespace {

constexpr double kPi = std::numbers::pi;

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Reflective sample lookup for centered framing.
double sample_at(const std::vector<double>& s, long idx) {
    const long n = long(s.size());
    while (idx < 0 || idx >= n) {
        if (idx < 0) idx = -idx;
        if (idx >= n) idx = 2 * (n - 1) - idx;
    }
    return s[std::size_t(idx)];
}

FeatureSequence stft_impl(const AudioSignal& sig, int fft_size,
                          double hop_seconds, bool parallel) {
    if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
        throw std::invalid_argument("fft_size must be a power of two");
    if (long(sig.samples.size()) < fft_size)
        throw std::invalid_argument("signal shorter than one FFT frame");
    if (hop_seconds <= 0.0) throw std::invalid_argument("hop must be positive");

    const int hop = int(std::lround(hop_seconds * sig.sample_rate));
    if (hop < 1) throw std::invalid_argument("hop shorter than one sample");
    const Eigen::Index bins = fft_size / 2 + 1;
    const Eigen::Index frames = Eigen::Index(sig.samples.size() / hop) + 1;

    std::vector<double> window(fft_size);
    for (int k = 0; k < fft_size; ++k)
        window[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / fft_size));

    // Remove the global DC offset so the cepstra do not depend on it.
    double mean = 0.0;
    for (double s : sig.samples) mean += s;
    mean /= double(sig.samples.size());

    FeatureSequence out;
    out.data.resize(bins, frames);
    out.hop_seconds = double(hop) / sig.sample_rate;
    out.sample_rate = sig.sample_rate;

#pragma omp parallel for schedule(static) if (parallel)
    for (Eigen::Index t = 0; t < frames; ++t) {
        std::vector<std::complex<double>> buf(fft_size);
        const long start = long(t) * hop - fft_size / 2;
        for (int k = 0; k < fft_size; ++k)
            buf[k] = (sample_at(sig.samples, start + k) - mean) * window[k];
        fft(buf);
        for (Eigen::Index bin = 0; bin < bins; ++bin)
            out.data(bin, t) = std::abs(buf[std::size_t(bin)]);
    }
    return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

namespace serial {
FeatureSequence stft_mag(const AudioSignal& sig, int fft_size, double hop_seconds) {
    return stft_impl(sig, fft_size, hop_seconds, false);
}
}  // namespace serial

FeatureSequence stft_mag(const AudioSignal& sig, int fft_size, double hop_seconds) {
    return stft_impl(sig, fft_size, hop_seconds, true);
}

FeatureSequence mcep(const FeatureSequence& spec, int order, int sample_rate,
                     bool drop_c0) {
    constexpr int kMelBands = 40;
    constexpr double kLogFloor = 1e-10;
    if (order < 0 || order + 1 > kMelBands)
        throw std::invalid_argument("mcep order must satisfy 0 <= order < 40");
    if (sample_rate <= 0) throw std::invalid_argument("sample_rate must be positive");

    const Eigen::Index bins = spec.dims();
    const int fft_size = int(bins - 1) * 2;

    // Triangular mel filterbank, 0 Hz .. Nyquist, HTK mel scale.
    const double mel_max = hz_to_mel(sample_rate / 2.0);
    std::vector<double> edges(kMelBands + 2);
    for (int k = 0; k < kMelBands + 2; ++k)
        edges[k] = mel_to_hz(mel_max * k / (kMelBands + 1));

    Eigen::MatrixXd fbank = Eigen::MatrixXd::Zero(kMelBands, bins);
    for (int band = 0; band < kMelBands; ++band) {
        const double lo = edges[band], mid = edges[band + 1], hi = edges[band + 2];
        for (Eigen::Index bin = 0; bin < bins; ++bin) {
            const double f = double(bin) * sample_rate / fft_size;
            if (f > lo && f < mid)
                fbank(band, bin) = (f - lo) / (mid - lo);
            else if (f >= mid && f < hi)
                fbank(band, bin) = (hi - f) / (hi - mid);
        }
        // Unit-area rows: a flat power spectrum yields equal band energies.
        const double area = fbank.row(band).sum();
        if (area > 0.0) fbank.row(band) /= area;
    }

    // Orthonormal DCT-II rows for coefficients 0..order.
    Eigen::MatrixXd dct(order + 1, kMelBands);
    for (int k = 0; k <= order; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / kMelBands)
                                    : std::sqrt(2.0 / kMelBands);
        for (int b = 0; b < kMelBands; ++b)
            dct(k, b) = scale * std::cos(kPi * k * (b + 0.5) / kMelBands);
    }

    Eigen::MatrixXd energies = fbank * spec.data.cwiseProduct(spec.data);
    energies = energies.cwiseMax(kLogFloor).array().log().matrix();

    FeatureSequence out;
    out.data = dct * energies;
    if (drop_c0) out.data = out.data.bottomRows(order).eval();
    out.hop_seconds = spec.hop_seconds;
    out.sample_rate = spec.sample_rate;
    out.label = spec.label;
    return out;
}

FeatureSequence extract_mcep(const AudioSignal& sig, int order, int fft_size,
                             double hop_seconds) {
    return mcep(stft_mag(sig, fft_size, hop_seconds), order, sig.sample_rate);
}

PitchContour f0_contour(const AudioSignal& sig, double hop_seconds, double fmin,
                        double fmax) {
    constexpr double kThreshold = 0.15;
    constexpr double kSilenceRms = 1e-4;
    const int sr = sig.sample_rate;
    const int window = int(std::ceil(2.0 * sr / fmin));
    if (long(sig.samples.size()) < window)
        throw std::invalid_argument("signal shorter than one analysis window");

    const int hop = int(std::lround(hop_seconds * sr));
    const int tau_min = std::max(2, int(std::floor(sr / fmax)));
    const int tau_max = int(std::ceil(sr / fmin));
    const long n_frames = long(sig.samples.size()) / hop + 1;

    PitchContour contour;
    contour.hop_seconds = double(hop) / sr;
    contour.f0_hz.assign(std::size_t(n_frames), 0.0);

#pragma omp parallel for schedule(static)
    for (long t = 0; t < n_frames; ++t) {
        // Zero-padded segment of window + tau_max samples around the frame center.
        const long center = t * hop;
        const long start = center - (window + tau_max) / 2;
        std::vector<double> seg(std::size_t(window + tau_max), 0.0);
        for (std::size_t k = 0; k < seg.size(); ++k) {
            const long idx = start + long(k);
            if (idx >= 0 && idx < long(sig.samples.size()))
                seg[k] = sig.samples[std::size_t(idx)];
        }

        double rms = 0.0;
        for (int k = 0; k < window; ++k) rms += seg[k] * seg[k];
        rms = std::sqrt(rms / window);
        if (rms < kSilenceRms) continue;

        // Cumulative-mean-normalized difference function.
        std::vector<double> diff(std::size_t(tau_max) + 1, 0.0);
        std::vector<double> cmnd(std::size_t(tau_max) + 1, 1.0);
        double running = 0.0;
        for (int tau = 1; tau <= tau_max; ++tau) {
            double d = 0.0;
            for (int k = 0; k < window; ++k) {
                const double delta = seg[k] - seg[k + tau];
                d += delta * delta;
            }
            diff[tau] = d;
            running += d;
            cmnd[tau] = running > 0.0 ? d * tau / running : 1.0;
        }

        int best_tau = 0;
        for (int tau = tau_min; tau <= tau_max; ++tau) {
            if (cmnd[tau] < kThreshold) {
                while (tau + 1 <= tau_max && cmnd[tau + 1] < cmnd[tau]) ++tau;
                best_tau = tau;
                break;
            }
        }
        if (best_tau == 0) continue;

        double tau_refined = best_tau;
        if (best_tau > 1 && best_tau < tau_max) {
            const double a = cmnd[best_tau - 1], b = cmnd[best_tau],
                         c = cmnd[best_tau + 1];
            const double denom = a - 2.0 * b + c;
            if (std::abs(denom) > 1e-12)
                tau_refined += 0.5 * (a - c) / denom;
        }

        const double f0 = sr / tau_refined;
        if (f0 >= 40.0 && f0 <= 1500.0) contour.f0_hz[std::size_t(t)] = f0;
    }
    return contour;
}

std::pair<FeatureSequence, FeatureSequence> pca_reduce(const FeatureSequence& x,
                                                       const FeatureSequence& y,
                                                       int k) {
    if (x.dims() != y.dims())
        throw std::invalid_argument("pca_reduce needs matching dims");
    const Eigen::Index d = x.dims();
    if (k < 1 || k > d) throw std::invalid_argument("pca_reduce: k must be in [1, d]");

    const Eigen::Index n = x.frames() + y.frames();
    const Eigen::VectorXd mean =
        (x.data.rowwise().sum() + y.data.rowwise().sum()) / double(n);
    const Eigen::MatrixXd xc = x.data.colwise() - mean;
    const Eigen::MatrixXd yc = y.data.colwise() - mean;
    const Eigen::MatrixXd cov =
        (xc * xc.transpose() + yc * yc.transpose()) / double(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // Eigenvalues ascend; take the top-k columns in descending order.
    Eigen::MatrixXd basis(d, k);
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - c);
        for (Eigen::Index r = 0; r < d; ++r) {
            if (std::abs(v(r)) > 1e-12) {
                if (v(r) < 0) v = -v;
                break;
            }
        }
        basis.col(c) = v;
    }

    auto make = [&](const FeatureSequence& src, const Eigen::MatrixXd& centered) {
        FeatureSequence out;
        out.data = basis.transpose() * centered;
        out.hop_seconds = src.hop_seconds;
        out.sample_rate = src.sample_rate;
        out.label = src.label;
        return out;
    };
    return {make(x, xc), make(y, yc)};
}

FeatureSequence znorm(const FeatureSequence& seq) {
    FeatureSequence out = seq;
    const double n = double(seq.frames());
    for (Eigen::Index r = 0; r < seq.dims(); ++r) {
        const double mean = seq.data.row(r).mean();
        const double var = (seq.data.row(r).array() - mean).square().sum() / n;
        const double scale = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
        out.data.row(r) = (seq.data.row(r).array() - mean) * scale;
    }
    return out;
}

AudioSignal resample_linear(const AudioSignal& sig, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("target rate must be positive");
    if (sig.sample_rate == target_rate) return sig;

    AudioSignal out;
    out.sample_rate = target_rate;
    const double ratio = double(sig.sample_rate) / target_rate;
    const auto n = std::size_t(double(sig.samples.size()) / ratio);
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double pos = k * ratio;
        const auto i = std::size_t(pos);
        const double frac = pos - double(i);
        const double a = sig.samples[std::min(i, sig.samples.size() - 1)];
        const double b = sig.samples[std::min(i + 1, sig.samples.size() - 1)];
        out.samples[k] = a + frac * (b - a);
    }
    return out;
}

}  // namespace warp
