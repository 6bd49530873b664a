#include "plrtest/pipeline.hpp"

#include "plrtest/error.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace plrtest {

namespace {

std::optional<CircleMeasure> try_measure(const Frame& frame, std::optional<Point> hint,
                                         const HoughConfig& cfg, bool crop, std::string& error,
                                         AccumulatorSlice* slice) {
    try {
        return measure_pupil(frame, hint, cfg, crop, slice);
    } catch (const NoCircle& e) {
        error = e.what();
    } catch (const GeometryError& e) {
        error = e.what();
    }
    return std::nullopt;
}

}  // namespace

FrameDetection detect_frame(const Frame& frame, bool crop, const DetectorConfig& cfg,
                            bool want_accumulator) {
    FrameDetection d;
    d.center = locate_pupil(frame, cfg.starburst);
    if (crop && !d.center.valid) {
        d.error = "no starburst features";
        return d;
    }
    std::optional<Point> hint;
    if (d.center.valid) hint = Point{d.center.x, d.center.y};
    d.circle = try_measure(frame, hint, cfg.hough, crop, d.error,
                           want_accumulator ? &d.accumulator : nullptr);
    return d;
}

PupilSample to_sample(const FrameDetection& d, int frame_index) {
    PupilSample s;
    s.frame_index = frame_index;
    if (d.circle) {
        s.cx = d.circle->cx;
        s.cy = d.circle->cy;
        s.radius = d.circle->radius;
        s.valid = d.circle->radius > 0.0;
    }
    return s;
}

int worker_count() {
    if (const char* env = std::getenv("PLRTEST_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void parallel_for(int n, const std::function<void(int)>& fn, int workers) {
    workers = std::max(1, std::min(workers, n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

PupilTrace detect_sequence(const FrameSequence& seq, bool crop, const DetectorConfig& cfg,
                           const Progress& progress) {
    const int n = static_cast<int>(seq.frames.size());
    PupilTrace trace;
    trace.eye = seq.eye;
    trace.frame_rate = seq.frame_rate;
    trace.samples.resize(seq.frames.size());
    std::mutex progress_mutex;
    int done = 0;
    parallel_for(n, [&](int i) {
        trace.samples[static_cast<std::size_t>(i)] =
            to_sample(detect_frame(seq.frames[static_cast<std::size_t>(i)], crop, cfg), i);
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(++done, n);
        }
    });
    return trace;
}

ModeTraces detect_sequence_both(const FrameSequence& seq, const DetectorConfig& cfg, int workers) {
    const int n = static_cast<int>(seq.frames.size());
    ModeTraces out;
    for (PupilTrace* t : {&out.cropped, &out.full}) {
        t->eye = seq.eye;
        t->frame_rate = seq.frame_rate;
        t->samples.resize(seq.frames.size());
    }
    parallel_for(
        n,
        [&](int i) {
            const Frame& frame = seq.frames[static_cast<std::size_t>(i)];
            FrameDetection d;
            d.center = locate_pupil(frame, cfg.starburst);
            std::optional<Point> hint;
            if (d.center.valid) hint = Point{d.center.x, d.center.y};
            PupilSample cropped{i, 0.0, 0.0, 0.0, false};
            if (hint) {
                d.circle = try_measure(frame, hint, cfg.hough, true, d.error, nullptr);
                cropped = to_sample(d, i);
            }
            d.circle = try_measure(frame, hint, cfg.hough, false, d.error, nullptr);
            out.cropped.samples[static_cast<std::size_t>(i)] = cropped;
            out.full.samples[static_cast<std::size_t>(i)] = to_sample(d, i);
        },
        workers);
    return out;
}

}  // namespace plrtest
