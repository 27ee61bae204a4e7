#include "warp/io.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace warp {
namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = {}) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

}  // namespace

void write_path_csv(const std::string& path, const WarpingPath& wp) {
    auto out = open_out(path);
    out << "i,j\n";
    for (const auto& [i, j] : wp.pairs) out << i << ',' << j << '\n';
}

WarpingPath read_path_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("i,j", 0) != 0)
        throw IoError(path + ": expected header 'i,j'");

    WarpingPath wp;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        int i = 0, j = 0;
        char comma = 0;
        std::istringstream row(line);
        if (!(row >> i >> comma >> j) || comma != ',')
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed row");
        wp.pairs.emplace_back(i, j);
    }
    return wp;
}

void write_f0_csv(const std::string& path, const PitchContour& contour) {
    auto out = open_out(path);
    out << "time_s,f0_hz\n";
    out.precision(10);
    for (std::size_t k = 0; k < contour.size(); ++k)
        out << double(k) * contour.hop_seconds << ',' << contour.f0_hz[k] << '\n';
}

PitchContour read_f0_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("time_s,f0_hz", 0) != 0)
        throw IoError(path + ": expected header 'time_s,f0_hz'");

    PitchContour contour;
    double prev_t = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0.0, f0 = 0.0;
        char comma = 0;
        std::istringstream row(line);
        if (!(row >> t >> comma >> f0) || comma != ',')
            throw IoError(path + ": malformed F0 row '" + line + "'");
        contour.f0_hz.push_back(f0);
        if (rows == 1) contour.hop_seconds = t - prev_t;
        prev_t = t;
        ++rows;
    }
    return contour;
}

namespace {

constexpr char kFeatMagic[8] = {'W', 'A', 'R', 'P', 'F', 'E', 'A', 'T'};

template <typename T>
void write_le(std::ostream& out, T v) {
    std::array<char, sizeof(T)> buf;
    std::memcpy(buf.data(), &v, sizeof(T));
    out.write(buf.data(), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("truncated feature file");
    return v;
}

}  // namespace

void write_features_bin(const std::string& path, const FeatureSequence& seq) {
    auto out = open_out(path, std::ios::binary);
    out.write(kFeatMagic, 8);
    write_le<uint8_t>(out, 1);
    write_le<uint32_t>(out, uint32_t(seq.dims()));
    write_le<uint32_t>(out, uint32_t(seq.frames()));
    write_le<double>(out, seq.hop_seconds);
    write_le<uint32_t>(out, uint32_t(seq.sample_rate));
    for (Eigen::Index t = 0; t < seq.frames(); ++t)
        for (Eigen::Index r = 0; r < seq.dims(); ++r)
            write_le<float>(out, float(seq.data(r, t)));
}

FeatureSequence read_features_bin(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kFeatMagic, 8) != 0)
        throw IoError(path + ": missing WARPFEAT magic");
    const auto version = read_le<uint8_t>(in);
    if (version != 1)
        throw IoError(path + ": unsupported version " + std::to_string(version));

    FeatureSequence seq;
    const auto d = read_le<uint32_t>(in);
    const auto n = read_le<uint32_t>(in);
    seq.hop_seconds = read_le<double>(in);
    seq.sample_rate = int(read_le<uint32_t>(in));
    if (d == 0 || n == 0) throw IoError(path + ": empty feature matrix");

    seq.data.resize(d, n);
    for (uint32_t t = 0; t < n; ++t)
        for (uint32_t r = 0; r < d; ++r) seq.data(r, t) = read_le<float>(in);
    seq.label = path;
    return seq;
}

void write_features_csv(const std::string& path, const FeatureSequence& seq) {
    auto out = open_out(path);
    out.precision(10);
    for (Eigen::Index t = 0; t < seq.frames(); ++t) {
        for (Eigen::Index r = 0; r < seq.dims(); ++r) {
            if (r) out << ',';
            out << seq.data(r, t);
        }
        out << '\n';
    }

    ordered_json meta;
    meta["d"] = seq.dims();
    meta["n"] = seq.frames();
    meta["hop_seconds"] = seq.hop_seconds;
    meta["sample_rate"] = seq.sample_rate;
    meta["label"] = seq.label;
    open_out(path + ".json") << meta.dump(2) << '\n';
}

FeatureSequence read_features_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError(path + ": ragged CSV row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty feature CSV");

    FeatureSequence seq;
    seq.data.resize(Eigen::Index(rows.front().size()), Eigen::Index(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t r = 0; r < rows[t].size(); ++r)
            seq.data(Eigen::Index(r), Eigen::Index(t)) = rows[t][r];

    std::ifstream meta_in(path + ".json");
    if (meta_in) {
        const auto meta = ordered_json::parse(meta_in, nullptr, false);
        if (!meta.is_discarded()) {
            seq.hop_seconds = meta.value("hop_seconds", 0.0);
            seq.sample_rate = meta.value("sample_rate", 0);
            seq.label = meta.value("label", std::string{});
        }
    }
    return seq;
}

FeatureSequence read_features_auto(const std::string& path) {
    {
        auto in = open_in(path, std::ios::binary);
        char magic[8] = {};
        in.read(magic, 8);
        if (in && std::memcmp(magic, kFeatMagic, 8) == 0)
            return read_features_bin(path);
    }
    return read_features_csv(path);
}

namespace {

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string projection_to_json(const ProjectionPair& proj) {
    ordered_json j;
    j["d"] = proj.vx.rows();
    j["b"] = proj.vx.cols();
    j["lambda"] = proj.lambda;
    j["correlations"] = proj.correlations;
    j["vx"] = matrix_to_json(proj.vx);
    j["vy"] = matrix_to_json(proj.vy);
    j["mean_x"] = std::vector<double>(proj.mean_x.data(),
                                      proj.mean_x.data() + proj.mean_x.size());
    j["mean_y"] = std::vector<double>(proj.mean_y.data(),
                                      proj.mean_y.data() + proj.mean_y.size());
    return j.dump(2);
}

std::string alignment_report_json(const AlignmentResult& result,
                                  const std::string& path_file) {
    ordered_json j;
    j["path_file"] = path_file;
    j["path_length"] = result.path.size();
    j["final_cost"] = result.final_cost;
    j["normalized_cost"] = result.normalized_cost;
    j["objective_trace"] = result.objective_trace;
    if (result.projections) {
        j["correlations"] = result.projections->correlations;
        j["b"] = result.projections->vx.cols();
        j["lambda"] = result.projections->lambda;
    }
    return j.dump(2);
}

std::string results_to_json(const std::vector<CellResult>& results,
                            const ExperimentConfig& cfg) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
        ordered_json cell;
        cell["method"] = to_string(r.method);
        cell["task"] = to_string(r.cell.task);
        cell["scenario"] = r.cell.scenario;
        if (r.cell.scenario == "linear") cell["r"] = r.cell.rate;
        cell["s"] = r.cell.shift_semitones;
        cell["n_songs"] = cfg.n_songs;
        cell["median_e"] = r.median_e;
        cell["iqr_e"] = r.iqr_e;
        cell["errors"] = r.errors;
        cell["seeds"] = r.seeds;
        if (!r.failures.empty()) cell["failures"] = r.failures;
        arr.push_back(std::move(cell));
    }
    return arr.dump(2);
}

std::string results_to_plot_csv(const std::vector<CellResult>& results) {
    std::ostringstream out;
    out.precision(10);
    out << "method,task,scenario,r,s,median_e,iqr_e\n";
    for (const auto& r : results)
        out << to_string(r.method) << ',' << to_string(r.cell.task) << ','
            << r.cell.scenario << ',' << r.cell.rate << ',' << r.cell.shift_semitones
            << ',' << r.median_e << ',' << r.iqr_e << '\n';
    return out.str();
}

}  // namespace warp
