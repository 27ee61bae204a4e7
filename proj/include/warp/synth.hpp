// Deterministic synthetic singing: a seeded note walk rendered by additive
// synthesis under per-note vowel formant envelopes, with continuous control
// curves returned so distorted variants can be re-rendered exactly.
#pragma once

#include <cstdint>
#include <vector>

#include "warp/types.hpp"

namespace warp {

struct Note {
    double start = 0.0;     // seconds
    double duration = 0.0;  // seconds
    int midi = 0;           // 0 = silent gap
    int vowel = 0;          // index into the formant presets
};

/// Monotone piecewise-linear map from source time onto target time;
/// slope 1/r per chunk.
struct TimeWarp {
    std::vector<double> t_break;  // source times, ascending, first 0
    std::vector<double> u_break;  // target times, same size

    double operator()(double t) const;  // source -> target
    double inverse(double u) const;     // target -> source
    double source_duration() const { return t_break.back(); }
    double target_duration() const { return u_break.back(); }
};

/// Builds the warp for equal-length source chunks with the given stretch
/// rates (one rate = linear scenario).
TimeWarp make_warp(double source_duration, const std::vector<double>& rates);

struct SongControls {
    double duration = 0.0;
    std::vector<Note> notes;  // contiguous cover of [0, duration], gaps have midi 0

    /// Instantaneous F0 in Hz with vibrato and portamento; 0 in gaps.
    double f0_at(double t) const;
    /// Per-note amplitude envelope; 0 in gaps.
    double amp_at(double t) const;
    /// MIDI note active at t, 0 in gaps (for the accompaniment pad).
    int midi_at(double t) const;
    /// Vowel preset of the note active at t.
    int vowel_at(double t) const;
};

SongControls synth_song_controls(uint64_t seed, double duration_s = 30.0);

struct RenderOptions {
    int sample_rate = 16000;
    double shift_semitones = 0.0;
    bool accompaniment = false;   // triad pad at -10 dB + pink noise at -26 dB
    uint64_t noise_seed = 0;
    const TimeWarp* warp = nullptr;  // nullptr = identity
};

/// Renders the controls (optionally time-warped and pitch-shifted) to audio.
AudioSignal render_song(const SongControls& controls, const RenderOptions& opts);

/// Controls plus the straight (undistorted) render for one seeded song.
std::pair<AudioSignal, SongControls> synth_song(uint64_t seed,
                                                double duration_s = 30.0,
                                                int sample_rate = 16000);

}  // namespace warp
