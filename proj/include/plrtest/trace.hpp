#pragma once

#include "plrtest/frame.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace plrtest {

struct PupilSample {
    int frame_index = 0;
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    bool valid = false;

    friend bool operator==(const PupilSample&, const PupilSample&) = default;
};

struct PupilTrace {
    Eye eye = Eye::Right;
    std::vector<PupilSample> samples;
    double frame_rate = 30.0;

    /// Throws ConfigError when frame indices are not strictly increasing or a
    /// valid sample has a non-positive radius.
    void validate() const;
    std::size_t valid_count() const;
};

/// How the motion band is applied to the two axes.
enum class MotionRule {
    EitherAxis,  ///< invalidate when x OR y leaves its band
    BothAxes,    ///< invalidate only when x AND y leave their bands
};

struct TraceConfig {
    double motion_band_frac = 0.05;
    int smooth_window = 3;
    bool motion_filter = true;
    bool smoothing = true;
    MotionRule motion_rule = MotionRule::EitherAxis;
    /// Paired series shorter than this are rejected as DegenerateSeries.
    std::size_t min_paired = 3;

    void validate() const;
};

/// Single pass: the means are computed once from the currently valid samples.
/// Offending samples are marked invalid; radii and indices are untouched.
/// Throws EmptyTrace when no sample is valid.
PupilTrace motion_filter(const PupilTrace& trace, const TraceConfig& cfg);

/// Median filter over the radii of valid samples (replicate padding).
/// Invalid samples are neither changed nor used.
PupilTrace median_smooth(const PupilTrace& trace, const TraceConfig& cfg);

/// Median filter of a plain series with replicate padding; `window` must be odd.
std::vector<double> median_filter(const std::vector<double>& values, int window);

struct PairedSeries {
    std::vector<int> frame_indices;
    std::vector<double> right;
    std::vector<double> left;
};

/// Radii at frame indices valid in both traces, in index order.
/// Throws NoOverlap when there is no common valid index.
PairedSeries pair_traces(const PupilTrace& right, const PupilTrace& left);

/// CSV with header `frame_index,cx,cy,radius,valid`.
void write_trace_csv(const PupilTrace& trace, std::ostream& out);
void write_trace_csv(const PupilTrace& trace, const std::filesystem::path& path);
PupilTrace read_trace_csv(std::istream& in, Eye eye = Eye::Right, double frame_rate = 30.0);
PupilTrace read_trace_csv(const std::filesystem::path& path, Eye eye = Eye::Right,
                          double frame_rate = 30.0);

}  // namespace plrtest
