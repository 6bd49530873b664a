#pragma once

// Synthetic fixtures and brute-force oracles shared by the unit and acceptance tests.

#include "plrtest/frame.hpp"
#include "plrtest/hough.hpp"
#include "plrtest/synth.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using plrtest::Frame;
using plrtest::Point;

/// Dark disc (30) on a bright field (200).
struct DiscCase {
    Frame frame;
    Point center;
    double radius = 0.0;
};

/// 160x160 frames, centre in [60, 100]^2 (at least 60 px from every border),
/// radius in [20, 60]. Geometry comes from one seeded stream; trial i uses
/// noise seed i.
inline std::vector<DiscCase> disc_cases(int n, double sigma) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DiscCase> out;
    for (int i = 0; i < n; ++i) {
        DiscCase c;
        c.frame = Frame(160, 160, 200);
        c.center = {60.0 + 40.0 * u(rng), 60.0 + 40.0 * u(rng)};
        c.radius = 20.0 + 40.0 * u(rng);
        plrtest::paint_disc(c.frame, c.center, c.radius, 30);
        plrtest::add_gaussian_noise(c.frame, sigma, static_cast<std::uint64_t>(i));
        out.push_back(std::move(c));
    }
    return out;
}

/// 640x480 eye image with a dark eyebrow arc above the pupil. The arc is a
/// thick ring segment much larger than the pupil, so its edges outvote the
/// pupil boundary when the whole frame is searched.
struct DistractorCase {
    Frame frame;
    Point center;
    double radius = 0.0;
};

inline std::vector<DistractorCase> distractor_cases(int n, std::uint64_t seed = 5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DistractorCase> out;
    for (int i = 0; i < n; ++i) {
        const double r = 25.0 + 20.0 * u(rng);
        const Point c{320.0 + (u(rng) - 0.5) * r, 240.0 + (u(rng) - 0.5) * r};
        const double ring = 150.0 + 70.0 * u(rng);
        const double thick = 15.0 + 15.0 * u(rng);
        const double apex = 20.0 + 40.0 * u(rng);
        const Point bc{320.0 + (u(rng) - 0.5) * 80.0, apex + ring + thick};

        DistractorCase d;
        d.frame = Frame(640, 480, 200);
        for (int y = 0; y < 480; ++y) {
            if (y >= bc.y - 0.5 * (ring + thick)) break;
            for (int x = 0; x < 640; ++x) {
                const double dist = std::hypot(x - bc.x, y - bc.y);
                if (dist >= ring && dist <= ring + thick) d.frame.set(x, y, 60);
            }
        }
        plrtest::paint_disc(d.frame, c, r, 30);
        d.center = c;
        d.radius = r;
        out.push_back(std::move(d));
    }
    return out;
}

/// Edge map holding a rasterized circle outline (pixels within half a pixel of the circle).
inline void draw_ring(plrtest::BinaryMap& m, Point c, double r) {
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            const double d = std::hypot(x - c.x, y - c.y);
            if (std::fabs(d - r) < 0.5) m.bits[static_cast<std::size_t>(y * m.width + x)] = 1;
        }
}

inline plrtest::BinaryMap empty_map(int w, int h) {
    return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 0)};
}

/// Exhaustive CHT: every radius, every cell, every edge. An edge at distance d
/// from a cell centre votes for radius index k iff k - 0.5 <= d < k + 0.5 (in
/// cell units). Strict improvement in radius-major, then row, then column order
/// reproduces the tie-break of cht_detect.
inline plrtest::CircleMeasure naive_cht(const plrtest::BinaryMap& m, double r_min, double r_max,
                                        int bin) {
    const int cw = (m.width + bin - 1) / bin;
    const int ch = (m.height + bin - 1) / bin;
    std::vector<int> ex, ey;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) {
                ex.push_back(x / bin);
                ey.push_back(y / bin);
            }
    plrtest::CircleMeasure best;
    best.votes = 0;
    for (int r = static_cast<int>(std::ceil(r_min)); r <= r_max; r += bin) {
        const double rc = static_cast<double>(r) / bin;
        const double lo = std::max(0.0, rc - 0.5);
        const double hi = rc + 0.5;
        for (int y = 0; y < ch; ++y)
            for (int x = 0; x < cw; ++x) {
                int v = 0;
                for (std::size_t e = 0; e < ex.size(); ++e) {
                    const double dx = ex[e] - x, dy = ey[e] - y;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 >= lo * lo && d2 < hi * hi) ++v;
                }
                if (v > best.votes)
                    best = {x * bin + (bin - 1) / 2.0, y * bin + (bin - 1) / 2.0,
                            static_cast<double>(r), v};
            }
    }
    return best;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("plrtest_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
