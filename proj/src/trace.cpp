#include "plrtest/trace.hpp"

#include "plrtest/error.hpp"
#include "plrtest/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace plrtest {

void PupilTrace::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && samples[i].frame_index <= samples[i - 1].frame_index)
            throw ConfigError("trace frame indices must be strictly increasing");
        if (samples[i].valid && !(samples[i].radius > 0.0))
            throw ConfigError("valid trace sample has non-positive radius");
    }
}

std::size_t PupilTrace::valid_count() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.valid; }));
}

void TraceConfig::validate() const {
    if (!(motion_band_frac > 0.0 && motion_band_frac < 1.0))
        throw ConfigError("motion_band_frac must lie in (0, 1)");
    if (smooth_window < 1 || smooth_window % 2 == 0)
        throw ConfigError("smooth_window must be odd and >= 1");
}

PupilTrace motion_filter(const PupilTrace& trace, const TraceConfig& cfg) {
    cfg.validate();
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (const auto& s : trace.samples) {
        if (!s.valid) continue;
        sx += s.cx;
        sy += s.cy;
        ++n;
    }
    if (n == 0) throw EmptyTrace("motion filter needs at least one valid sample");

    const double mean_x = sx / static_cast<double>(n);
    const double mean_y = sy / static_cast<double>(n);
    const double band_x = cfg.motion_band_frac * std::abs(mean_x);
    const double band_y = cfg.motion_band_frac * std::abs(mean_y);

    PupilTrace out = trace;
    for (auto& s : out.samples) {
        if (!s.valid) continue;
        const bool off_x = std::abs(s.cx - mean_x) > band_x;
        const bool off_y = std::abs(s.cy - mean_y) > band_y;
        const bool reject =
            cfg.motion_rule == MotionRule::EitherAxis ? (off_x || off_y) : (off_x && off_y);
        if (reject) s.valid = false;
    }
    return out;
}

std::vector<double> median_filter(const std::vector<double>& values, int window) {
    if (window < 1 || window % 2 == 0) throw ConfigError("median window must be odd and >= 1");
    const int n = static_cast<int>(values.size());
    const int half = window / 2;
    std::vector<double> out(values.size());
    std::vector<double> buf(static_cast<std::size_t>(window));
    for (int i = 0; i < n; ++i) {
        for (int k = -half; k <= half; ++k)
            buf[static_cast<std::size_t>(k + half)] = values[static_cast<std::size_t>(std::clamp(i + k, 0, n - 1))];
        std::nth_element(buf.begin(), buf.begin() + half, buf.end());
        out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(half)];
    }
    return out;
}

PupilTrace median_smooth(const PupilTrace& trace, const TraceConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> where;
    std::vector<double> radii;
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        if (trace.samples[i].valid) {
            where.push_back(i);
            radii.push_back(trace.samples[i].radius);
        }
    }
    PupilTrace out = trace;
    const auto smoothed = median_filter(radii, cfg.smooth_window);
    for (std::size_t k = 0; k < where.size(); ++k) out.samples[where[k]].radius = smoothed[k];
    return out;
}

PairedSeries pair_traces(const PupilTrace& right, const PupilTrace& left) {
    PairedSeries out;
    std::size_t i = 0, j = 0;
    while (i < right.samples.size() && j < left.samples.size()) {
        const auto& a = right.samples[i];
        const auto& b = left.samples[j];
        if (a.frame_index < b.frame_index) {
            ++i;
        } else if (b.frame_index < a.frame_index) {
            ++j;
        } else {
            if (a.valid && b.valid) {
                out.frame_indices.push_back(a.frame_index);
                out.right.push_back(a.radius);
                out.left.push_back(b.radius);
            }
            ++i;
            ++j;
        }
    }
    if (out.frame_indices.empty()) throw NoOverlap("right and left traces share no valid frame");
    return out;
}

void write_trace_csv(const PupilTrace& trace, std::ostream& out) {
    out << "frame_index,cx,cy,radius,valid\n";
    for (const auto& s : trace.samples) {
        out << s.frame_index << ',' << format_double(s.cx) << ',' << format_double(s.cy) << ','
            << format_double(s.radius) << ',' << (s.valid ? 1 : 0) << '\n';
    }
}

void write_trace_csv(const PupilTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_trace_csv(trace, out);
    if (!out) throw IoError("write failed for " + path.string());
}

PupilTrace read_trace_csv(std::istream& in, Eye eye, double frame_rate) {
    PupilTrace trace;
    trace.eye = eye;
    trace.frame_rate = frame_rate;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("trace CSV is empty");
    if (trim(line) != "frame_index,cx,cy,radius,valid")
        throw FormatError("trace CSV header must be frame_index,cx,cy,radius,valid");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw FormatError("trace CSV line " + std::to_string(lineno) + ": expected 5 fields");
        PupilSample s;
        s.frame_index = parse_int(fields[0], "frame_index");
        s.cx = parse_double(fields[1], "cx");
        s.cy = parse_double(fields[2], "cy");
        s.radius = parse_double(fields[3], "radius");
        const int valid = parse_int(fields[4], "valid");
        if (valid != 0 && valid != 1)
            throw FormatError("trace CSV line " + std::to_string(lineno) + ": valid must be 0 or 1");
        s.valid = valid == 1;
        trace.samples.push_back(s);
    }
    try {
        trace.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("trace CSV: ") + e.what());
    }
    return trace;
}

PupilTrace read_trace_csv(const std::filesystem::path& path, Eye eye, double frame_rate) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_trace_csv(in, eye, frame_rate);
}

}  // namespace plrtest
