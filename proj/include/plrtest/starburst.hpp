#pragma once

#include "plrtest/frame.hpp"

#include <optional>
#include <vector>

namespace plrtest {

/// Ray-casting pupil localizer settings.
///
/// Rays are cast from the current centre estimate at equal angular spacing.
/// Each pass of the threshold sweep (from `threshold_max` down to
/// `threshold_min`) reuses the centre produced by the previous accepted pass.
struct StarburstConfig {
    int num_rays = 18;
    double ray_step = 1.0;
    int threshold_max = 255;
    int threshold_min = 0;
    int threshold_step = 5;
    int min_feature_points = 3;

    void validate() const;
};

struct FeaturePoint {
    double x = 0.0;
    double y = 0.0;
    int gradient = 0;  ///< I(p_k) - I(p_{k-1}) at detection, always > threshold
    double ray_angle = 0.0;
};

struct StarburstIteration {
    int threshold = 0;
    Point center;  ///< centre after this pass
    int feature_count = 0;
};

struct PupilCenterEstimate {
    double x = 0.0;
    double y = 0.0;
    bool valid = false;
    int feature_count = 0;

    /// Accepted passes only, in sweep order.
    std::vector<StarburstIteration> iterations;
    /// Every feature point that contributed to the final mean.
    std::vector<FeaturePoint> features;
};

/// (floor(W/2), floor(H/2)).
Point init_center(const Frame& frame);

/// Marches from `origin` along `angle` and returns the first sample whose
/// forward intensity difference exceeds `threshold` (dark-to-bright only).
/// The returned position is the midpoint of the two samples straddling the
/// transition. Returns nullopt when the march leaves the frame first.
std::optional<FeaturePoint> cast_ray(const Frame& frame, Point origin, double angle,
                                     int threshold, double ray_step = 1.0);

std::vector<FeaturePoint> detect_features(const Frame& frame, Point center, int threshold,
                                          const StarburstConfig& cfg);

PupilCenterEstimate locate_pupil(const Frame& frame, const StarburstConfig& cfg = {});

}  // namespace plrtest
