#include "plrtest/starburst.hpp"

#include "plrtest/error.hpp"

#include <cmath>
#include <numbers>

namespace plrtest {

void StarburstConfig::validate() const {
    if (num_rays < 4) throw ConfigError("starburst: num_rays must be >= 4");
    if (!(ray_step > 0.0)) throw ConfigError("starburst: ray_step must be positive");
    if (threshold_max <= threshold_min)
        throw ConfigError("starburst: threshold_max must exceed threshold_min");
    if (threshold_min < 0 || threshold_max > 255)
        throw ConfigError("starburst: thresholds must lie in [0, 255]");
    if (threshold_step < 1) throw ConfigError("starburst: threshold_step must be >= 1");
    if (min_feature_points < 1) throw ConfigError("starburst: min_feature_points must be >= 1");
}

Point init_center(const Frame& frame) {
    return {static_cast<double>(frame.width() / 2), static_cast<double>(frame.height() / 2)};
}

namespace {

inline int nearest(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

std::optional<FeaturePoint> cast_ray(const Frame& frame, Point origin, double angle,
                                     int threshold, double ray_step) {
    const double dx = std::cos(angle) * ray_step;
    const double dy = std::sin(angle) * ray_step;

    double px = origin.x;
    double py = origin.y;
    int ix = nearest(px);
    int iy = nearest(py);
    if (!frame.contains(ix, iy)) return std::nullopt;
    int previous = frame.at(ix, iy);

    for (int k = 1;; ++k) {
        const double qx = origin.x + k * dx;
        const double qy = origin.y + k * dy;
        ix = nearest(qx);
        iy = nearest(qy);
        if (!frame.contains(ix, iy)) return std::nullopt;
        const int current = frame.at(ix, iy);
        const int gradient = current - previous;
        if (gradient > threshold) {
            return FeaturePoint{0.5 * (px + qx), 0.5 * (py + qy), gradient, angle};
        }
        previous = current;
        px = qx;
        py = qy;
    }
}

std::vector<FeaturePoint> detect_features(const Frame& frame, Point center, int threshold,
                                          const StarburstConfig& cfg) {
    std::vector<FeaturePoint> out;
    out.reserve(static_cast<std::size_t>(cfg.num_rays));
    const double spacing = 2.0 * std::numbers::pi / cfg.num_rays;
    for (int i = 0; i < cfg.num_rays; ++i) {
        if (auto fp = cast_ray(frame, center, i * spacing, threshold, cfg.ray_step))
            out.push_back(*fp);
    }
    return out;
}

PupilCenterEstimate locate_pupil(const Frame& frame, const StarburstConfig& cfg) {
    cfg.validate();
    PupilCenterEstimate est;
    Point center = init_center(frame);

    for (int t = cfg.threshold_max; t >= cfg.threshold_min; t -= cfg.threshold_step) {
        auto features = detect_features(frame, center, t, cfg);
        if (static_cast<int>(features.size()) < cfg.min_feature_points) continue;

        double sx = 0.0, sy = 0.0;
        for (const auto& f : features) {
            sx += f.x;
            sy += f.y;
        }
        const double n = static_cast<double>(features.size());
        center = {sx / n, sy / n};
        est.iterations.push_back({t, center, static_cast<int>(features.size())});
        est.features.insert(est.features.end(), features.begin(), features.end());
    }

    est.feature_count = static_cast<int>(est.features.size());
    est.valid = est.feature_count >= cfg.min_feature_points;
    if (!est.valid) {
        const Point c0 = init_center(frame);
        est.x = c0.x;
        est.y = c0.y;
        return est;
    }

    // Final location: mean over every recorded feature point of every accepted pass.
    double sx = 0.0, sy = 0.0;
    for (const auto& f : est.features) {
        sx += f.x;
        sy += f.y;
    }
    est.x = sx / est.feature_count;
    est.y = sy / est.feature_count;
    return est;
}

}  // namespace plrtest
