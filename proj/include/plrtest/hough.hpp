#pragma once

#include "plrtest/frame.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace plrtest {

enum class RadiusMode { FullImage, Explicit };

/// Circular Hough Transform settings.
///
/// Defaults were pinned by the `calibrate` subcommand over synthetic eye
/// fixtures; see README.md for the sweep.
struct HoughConfig {
    double canny_threshold = 30.0;   ///< Sobel magnitude (intensity units) marking an edge
    int accumulator_threshold = 30;  ///< minimum votes for an accepted circle
    int accumulator_bin = 1;         ///< pixels per accumulator cell and radius step
    double r_min_frac = 0.05;        ///< r_min as a fraction of r_max
    RadiusMode r_max_mode = RadiusMode::FullImage;
    double r_max_explicit = 0.0;     ///< used when r_max_mode == Explicit

    void validate() const;
};

struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    bool at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)] != 0;
    }
    std::size_t count() const;
};

struct CircleMeasure {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    int votes = 0;
};

/// Sobel gradient magnitude, scaled so a unit-width step of height h reads h.
std::vector<float> sobel_magnitude(const Frame& frame);

/// Pixels whose gradient magnitude is nonzero and >= canny_threshold.
/// The one-pixel frame border is never marked.
BinaryMap edge_map(const Frame& frame, const HoughConfig& cfg);

/// Optional debug output of `cht_detect`: the vote plane at the winning radius.
struct AccumulatorSlice {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> votes;

    /// Linear rescale of the votes to [0, 255] for inspection.
    Frame to_frame() const;
};

/// Votes each edge pixel onto every accumulator cell whose centre lies at
/// distance round(r) for r in [r_min, r_max] (step accumulator_bin), then
/// returns the best cell. Ties go to the smaller radius, then smaller (cy, cx).
/// Throws NoCircle when there are no edges or the peak is below
/// accumulator_threshold.
CircleMeasure cht_detect(const BinaryMap& edges, double r_min, double r_max,
                         const HoughConfig& cfg, AccumulatorSlice* debug = nullptr);

/// Radius search range used by measure_pupil for an image of the given size.
struct RadiusRange {
    double r_min = 0.0;
    double r_max = 0.0;
};
RadiusRange search_range(int width, int height, const HoughConfig& cfg);

/// Full-frame (crop == false) or quarter-crop (crop == true) pupil sizing.
/// The result is always expressed in parent-frame coordinates.
CircleMeasure measure_pupil(const Frame& frame, std::optional<Point> center_hint,
                            const HoughConfig& cfg, bool crop,
                            AccumulatorSlice* debug = nullptr);

}  // namespace plrtest
