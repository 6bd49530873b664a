#pragma once

#include "plrtest/frame.hpp"
#include "plrtest/hough.hpp"
#include "plrtest/starburst.hpp"
#include "plrtest/trace.hpp"

#include <functional>
#include <optional>

namespace plrtest {

struct DetectorConfig {
    StarburstConfig starburst;
    HoughConfig hough;
};

/// Everything measured on one frame. A failed measurement leaves its
/// optional empty; `error` carries the reason.
struct FrameDetection {
    PupilCenterEstimate center;
    std::optional<CircleMeasure> circle;
    std::string error;
    AccumulatorSlice accumulator;  ///< filled only when requested
};

/// Starburst, then the CHT on the whole frame or on the quarter crop around
/// the Starburst centre. In crop mode an invalid Starburst estimate is a
/// detection failure.
FrameDetection detect_frame(const Frame& frame, bool crop, const DetectorConfig& cfg,
                            bool want_accumulator = false);

/// Radius and centre come from the CHT circle; failures become invalid samples.
PupilSample to_sample(const FrameDetection& d, int frame_index);

/// Worker count: PLRTEST_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
int worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(int n, const std::function<void(int)>& fn, int workers = worker_count());

using Progress = std::function<void(int done, int total)>;

PupilTrace detect_sequence(const FrameSequence& seq, bool crop, const DetectorConfig& cfg,
                           const Progress& progress = {});

/// Both measuring modes from a single Starburst pass per frame.
struct ModeTraces {
    PupilTrace cropped;
    PupilTrace full;
};
ModeTraces detect_sequence_both(const FrameSequence& seq, const DetectorConfig& cfg, int workers = worker_count());

}  // namespace plrtest
