#include "warp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace warp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVibratoHz = 5.5;
constexpr double kVibratoCents = 30.0;
constexpr double kPortamentoSec = 0.060;
constexpr double kAttackSec = 0.030;
constexpr double kReleaseSec = 0.050;
constexpr int kHarmonics = 20;

double midi_to_hz(int midi) { return 440.0 * std::pow(2.0, (midi - 69) / 12.0); }

// 3-formant spectral envelopes for five sung vowels (a, e, i, o, u) plus a
// gentle tilt. Per-note vowels give the timbre pitch-invariant note identity.
constexpr int kVowels = 5;
constexpr double kFormantHz[kVowels][3] = {{800.0, 1150.0, 2900.0},
                                           {400.0, 2000.0, 2800.0},
                                           {300.0, 2300.0, 3000.0},
                                           {450.0, 800.0, 2830.0},
                                           {325.0, 700.0, 2700.0}};

double formant_envelope(double hz, int vowel) {
    static constexpr double widths[3] = {90.0, 140.0, 200.0};
    static constexpr double gains[3] = {1.0, 0.63, 0.35};
    double e = 0.05;
    for (int k = 0; k < 3; ++k) {
        const double z = (hz - kFormantHz[vowel][k]) / widths[k];
        e += gains[k] * std::exp(-0.5 * z * z);
    }
    return e;
}

}  // namespace

double TimeWarp::operator()(double t) const {
    if (t <= t_break.front()) return u_break.front();
    if (t >= t_break.back()) return u_break.back();
    const auto it = std::upper_bound(t_break.begin(), t_break.end(), t);
    const auto k = std::size_t(it - t_break.begin()) - 1;
    const double frac = (t - t_break[k]) / (t_break[k + 1] - t_break[k]);
    return u_break[k] + frac * (u_break[k + 1] - u_break[k]);
}

double TimeWarp::inverse(double u) const {
    if (u <= u_break.front()) return t_break.front();
    if (u >= u_break.back()) return t_break.back();
    const auto it = std::upper_bound(u_break.begin(), u_break.end(), u);
    const auto k = std::size_t(it - u_break.begin()) - 1;
    const double frac = (u - u_break[k]) / (u_break[k + 1] - u_break[k]);
    return t_break[k] + frac * (t_break[k + 1] - t_break[k]);
}

TimeWarp make_warp(double source_duration, const std::vector<double>& rates) {
    if (rates.empty()) throw std::invalid_argument("make_warp needs >= 1 rate");
    for (double r : rates)
        if (r < 0.5 || r > 2.0)
            throw std::invalid_argument("stretch rate outside [0.5, 2.0]");

    TimeWarp w;
    const double chunk = source_duration / double(rates.size());
    w.t_break.push_back(0.0);
    w.u_break.push_back(0.0);
    for (double r : rates) {
        w.t_break.push_back(w.t_break.back() + chunk);
        w.u_break.push_back(w.u_break.back() + chunk / r);
    }
    return w;
}

double SongControls::f0_at(double t) const {
    if (t < 0.0 || t >= duration) return 0.0;
    std::size_t k = 0;
    while (k + 1 < notes.size() && notes[k + 1].start <= t) ++k;
    const Note& note = notes[k];
    if (note.midi == 0) return 0.0;

    double hz = midi_to_hz(note.midi);
    // Portamento: glide from the previous pitched note over 60 ms.
    const double into = t - note.start;
    if (into < kPortamentoSec && k > 0 && notes[k - 1].midi != 0) {
        const double from = midi_to_hz(notes[k - 1].midi);
        const double mix = into / kPortamentoSec;
        hz = from * std::pow(hz / from, mix);
    }
    const double vib = kVibratoCents * std::sin(2.0 * kPi * kVibratoHz * t);
    return hz * std::pow(2.0, vib / 1200.0);
}

double SongControls::amp_at(double t) const {
    if (t < 0.0 || t >= duration) return 0.0;
    std::size_t k = 0;
    while (k + 1 < notes.size() && notes[k + 1].start <= t) ++k;
    const Note& note = notes[k];
    if (note.midi == 0) return 0.0;

    const double into = t - note.start;
    const double left = note.duration - into;
    double env = 1.0;
    if (into < kAttackSec) env *= into / kAttackSec;
    if (left < kReleaseSec) env *= std::max(left, 0.0) / kReleaseSec;
    // Slight decay across the note keeps repeated pitches distinguishable.
    env *= 1.0 - 0.25 * into / note.duration;
    return env;
}

int SongControls::midi_at(double t) const {
    if (t < 0.0 || t >= duration) return 0;
    std::size_t k = 0;
    while (k + 1 < notes.size() && notes[k + 1].start <= t) ++k;
    return notes[k].midi;
}

int SongControls::vowel_at(double t) const {
    if (t < 0.0 || t >= duration) return 0;
    std::size_t k = 0;
    while (k + 1 < notes.size() && notes[k + 1].start <= t) ++k;
    return notes[k].vowel;
}

SongControls synth_song_controls(uint64_t seed, double duration_s) {
    if (duration_s < 2.0)
        throw std::invalid_argument("song duration must be >= 2 s");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> note_len(0.3, 1.0);
    std::uniform_real_distribution<double> gap_len(0.15, 0.45);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> walk(-2, 2);

    // C major scale degrees covering MIDI 55..76.
    static constexpr int kScale[] = {55, 57, 59, 60, 62, 64, 65, 67,
                                     69, 71, 72, 74, 76};
    constexpr int kScaleLen = int(std::size(kScale));
    int degree = kScaleLen / 2;

    SongControls song;
    song.duration = duration_s;
    double t = 0.0;
    while (t < duration_s) {
        // Roughly 10% of the timeline is silent gaps.
        if (!song.notes.empty() && song.notes.back().midi != 0 && unit(rng) < 0.18) {
            const double d = std::min(gap_len(rng), duration_s - t);
            song.notes.push_back({t, d, 0});
            t += d;
            if (t >= duration_s) break;
        }
        degree = std::clamp(degree + walk(rng), 0, kScaleLen - 1);
        const double d = std::min(note_len(rng), duration_s - t);
        const int vowel = int(rng() % kVowels);
        song.notes.push_back({t, d, kScale[degree], vowel});
        t += d;
    }
    return song;
}

namespace {

// Harmonic stack with per-harmonic phase continuity; envelope sampled under
// the warp so the distorted render is exact, not resampled.
void add_voice(std::vector<double>& out, const SongControls& song,
               const RenderOptions& opts, double gain) {
    const double shift = std::pow(2.0, opts.shift_semitones / 12.0);
    const double dt = 1.0 / opts.sample_rate;
    const double nyquist = opts.sample_rate / 2.0;
    std::vector<double> phase(kHarmonics, 0.0);

    for (std::size_t n = 0; n < out.size(); ++n) {
        const double u = double(n) * dt;
        const double t = opts.warp ? opts.warp->inverse(u) : u;
        const double f0 = song.f0_at(t) * shift;
        const double amp = song.amp_at(t);
        if (f0 <= 0.0 || amp <= 0.0) continue;

        const int vowel = song.vowel_at(t);
        double s = 0.0;
        for (int h = 0; h < kHarmonics; ++h) {
            const double fh = f0 * (h + 1);
            phase[h] += 2.0 * kPi * fh * dt;
            if (fh >= nyquist) continue;
            s += formant_envelope(fh, vowel) / (h + 1) * std::sin(phase[h]);
        }
        out[n] += gain * amp * s;
    }
}

void add_pad(std::vector<double>& out, const SongControls& song,
             const RenderOptions& opts, double gain) {
    const double shift = std::pow(2.0, opts.shift_semitones / 12.0);
    const double dt = 1.0 / opts.sample_rate;
    const double nyquist = opts.sample_rate / 2.0;
    constexpr int kPadTones = 3;       // root-position triad
    constexpr int kPadHarmonics = 6;
    static constexpr int kOffsets[kPadTones] = {-12, -8, -5};  // root, third, fifth

    std::vector<double> phase(kPadTones * kPadHarmonics, 0.0);
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double u = double(n) * dt;
        const double t = opts.warp ? opts.warp->inverse(u) : u;
        const int midi = song.midi_at(t);
        if (midi == 0) continue;

        double s = 0.0;
        for (int v = 0; v < kPadTones; ++v) {
            const double base =
                440.0 * std::pow(2.0, (midi + kOffsets[v] - 69) / 12.0) * shift;
            for (int h = 0; h < kPadHarmonics; ++h) {
                const double fh = base * (h + 1);
                phase[v * kPadHarmonics + h] += 2.0 * kPi * fh * dt;
                if (fh >= nyquist) continue;
                s += std::sin(phase[v * kPadHarmonics + h]) / ((h + 1) * (h + 1));
            }
        }
        out[n] += gain * s;
    }
}

void add_pink_noise(std::vector<double>& out, uint64_t seed, double gain) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> white(-1.0, 1.0);
    // Paul Kellet's economy pink filter.
    double b0 = 0, b1 = 0, b2 = 0;
    for (double& s : out) {
        const double w = white(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        s += gain * 0.2 * (b0 + b1 + b2 + w * 0.1848);
    }
}

double rms(const std::vector<double>& v) {
    double acc = 0.0;
    for (double s : v) acc += s * s;
    return std::sqrt(acc / std::max<std::size_t>(v.size(), 1));
}

}  // namespace

AudioSignal render_song(const SongControls& controls, const RenderOptions& opts) {
    const double duration =
        opts.warp ? opts.warp->target_duration() : controls.duration;

    AudioSignal sig;
    sig.sample_rate = opts.sample_rate;
    sig.samples.assign(std::size_t(duration * opts.sample_rate), 0.0);

    add_voice(sig.samples, controls, opts, 1.0);
    const double voice_rms = rms(sig.samples);

    if (opts.accompaniment && voice_rms > 0.0) {
        std::vector<double> accomp(sig.samples.size(), 0.0);
        add_pad(accomp, controls, opts, 1.0);
        const double pad_rms = rms(accomp);
        const double pad_gain =
            pad_rms > 0.0 ? voice_rms * std::pow(10.0, -10.0 / 20.0) / pad_rms : 0.0;
        for (std::size_t n = 0; n < sig.samples.size(); ++n)
            sig.samples[n] += pad_gain * accomp[n];
        add_pink_noise(sig.samples, opts.noise_seed,
                       voice_rms * std::pow(10.0, -26.0 / 20.0));
    }

    // Normalize peak to 0.9 to stay inside [-1, 1].
    double peak = 0.0;
    for (double s : sig.samples) peak = std::max(peak, std::abs(s));
    if (peak > 0.0)
        for (double& s : sig.samples) s *= 0.9 / peak;
    return sig;
}

std::pair<AudioSignal, SongControls> synth_song(uint64_t seed, double duration_s,
                                                int sample_rate) {
    SongControls controls = synth_song_controls(seed, duration_s);
    RenderOptions opts;
    opts.sample_rate = sample_rate;
    return {render_song(controls, opts), std::move(controls)};
}

}  // namespace warp
