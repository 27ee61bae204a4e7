// Feature front end: STFT magnitudes, mel-cepstra, YIN-style F0, PCA.
#pragma once

#include "warp/types.hpp"

namespace warp {

/// Hann-windowed magnitude spectrogram, d = fft_size/2 + 1 rows.
/// Frames are centered with reflection padding; n = floor(len/hop) + 1.
FeatureSequence stft_mag(const AudioSignal& sig, int fft_size = 1024,
                         double hop_seconds = 0.005);

/// Mel-cepstral coefficients from a magnitude spectrogram:
/// 40 triangular mel bands -> log (floored) -> orthonormal DCT-II,
/// keeping coefficients 0..order (d = order + 1 rows).
FeatureSequence mcep(const FeatureSequence& spec, int order, int sample_rate,
                     bool drop_c0 = false);

/// Convenience: stft_mag + mcep with the default front-end settings.
FeatureSequence extract_mcep(const AudioSignal& sig, int order = 24,
                             int fft_size = 1024, double hop_seconds = 0.005);

/// Per-frame F0 via cumulative-mean-normalized difference (YIN), threshold
/// 0.15 with parabolic interpolation; unvoiced frames are 0. Frame count
/// matches stft_mag/mcep for the same audio and hop.
PitchContour f0_contour(const AudioSignal& sig, double hop_seconds = 0.005,
                        double fmin = 60.0, double fmax = 800.0);

/// Joint PCA on the column-concatenation of both sequences; projects each
/// onto the top-k components. Sign fixed by positive-first-element.
std::pair<FeatureSequence, FeatureSequence> pca_reduce(
    const FeatureSequence& x, const FeatureSequence& y, int k = 25);

/// Per-dimension z-normalization, statistics from the sequence itself.
FeatureSequence znorm(const FeatureSequence& seq);

/// Linear-interpolation resampling to target_rate.
AudioSignal resample_linear(const AudioSignal& sig, int target_rate);

namespace serial {
FeatureSequence stft_mag(const AudioSignal& sig, int fft_size = 1024,
                         double hop_seconds = 0.005);
}

}  // namespace warp
