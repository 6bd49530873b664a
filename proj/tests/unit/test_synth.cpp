#include "plrtest/error.hpp"
#include "plrtest/rapd.hpp"
#include "plrtest/synth.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace plrtest;

namespace {

std::vector<double> radii(const PupilTrace& t) {
    std::vector<double> v;
    for (const auto& s : t.samples) v.push_back(s.radius);
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Schedule, SwingingLayout) {
    const auto s = StimulusSchedule::swinging(10.0, Eye::Right, 2.0, 4, 3.0);
    EXPECT_DOUBLE_EQ(s.total_duration(), 14.0);
    EXPECT_EQ(s.total_frames(), 140);
    EXPECT_EQ(s.at(1.0), Illumination::None);
    EXPECT_EQ(s.at(2.5), Illumination::Right);
    EXPECT_EQ(s.at(5.5), Illumination::Left);
    EXPECT_EQ(s.at(-1.0), Illumination::None);
    EXPECT_EQ(s.at(20.0), Illumination::None);
}

TEST(PlrTrace, HealthyEyesAreIdentical) {
    const auto s = StimulusSchedule::swinging(30.0);
    PlrParams p;
    EXPECT_EQ(plr_trace(p, s, Eye::Right), plr_trace(p, s, Eye::Left));
}

TEST(PlrTrace, DarkScheduleIsConstant) {
    StimulusSchedule s;
    s.frame_rate = 20;
    s.segments = {{Illumination::None, 5.0}};
    PlrParams p;
    p.rapd_factor = 0.4;
    for (Eye e : {Eye::Left, Eye::Right})
        for (double r : plr_trace(p, s, e)) EXPECT_EQ(r, p.r_base);
}

TEST(PlrTrace, SteadyStateDepthScalesWithFactor) {
    const double fps = 30.0, seg = 12.0, dark = 2.0;
    const auto s = StimulusSchedule::swinging(fps, Eye::Right, dark, 6, seg);
    PlrParams p;
    p.rapd_factor = 0.3;
    p.affected_eye = Eye::Left;
    for (Eye eye : {Eye::Right, Eye::Left}) {
        const auto r = plr_trace(p, s, eye);
        // Last frame of each lit segment, after latency and any response lag have settled.
        for (int k = 0; k + 1 < 6; k += 2) {
            const auto at_end = [&](int segment) {
                const double t = dark + (segment + 1) * seg - 1.0 / fps;
                return r[static_cast<std::size_t>(std::lround(t * fps))];
            };
            const double healthy_depth = p.r_base - at_end(k);     // right eye lit
            const double affected_depth = p.r_base - at_end(k + 1);  // left eye lit
            EXPECT_NEAR(affected_depth / healthy_depth, 0.3, 0.3 * 0.05);
        }
    }
}

TEST(PlrTrace, RadiusWithinBaseRange) {
    const auto s = StimulusSchedule::swinging(30.0);
    for (double f : {1.0, 0.7, 0.3, 0.0}) {
        PlrParams p;
        p.rapd_factor = f;
        for (Eye e : {Eye::Left, Eye::Right})
            for (double r : plr_trace(p, s, e)) {
                EXPECT_GT(r, 0.0);
                EXPECT_LE(r, p.r_base);
            }
    }
}

TEST(Render, PupilAreaMatchesDisc) {
    RenderParams rp;
    rp.frame_w = 320;
    rp.frame_h = 240;
    rp.pupil_center = {160.3, 119.6};
    const Frame f = render_frame(40, rp);
    const auto dark = std::count_if(f.pixels().begin(), f.pixels().end(), [](auto v) { return v < 65; });
    const double area = std::numbers::pi * 40 * 40;
    EXPECT_NEAR(static_cast<double>(dark), area, 0.02 * area);
}

TEST(Render, DeterministicAndValidated) {
    RenderParams rp;
    rp.noise_sigma = 6;
    rp.seed = 9;
    rp.glint = Glint{{-10, -10}, 4};
    EXPECT_EQ(render_frame(30, rp), render_frame(30, rp));
    rp.noise_sigma = 0;
    EXPECT_EQ(render_frame(30, rp), render_frame(30, rp));
    EXPECT_THROW(render_frame(rp.iris_radius, rp), GeometryError);
    EXPECT_THROW(render_frame(rp.iris_radius + 5, rp), GeometryError);
}

TEST(CaseTruth, HealthyTracesCorrelatePerfectly) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto t = case_truth(false, 1.0, seed);
        EXPECT_EQ(radii(t.right), radii(t.left));
        EXPECT_EQ(plcc(radii(t.right), radii(t.left)), 1.0);
        EXPECT_EQ(dissimilarity(radii(t.right), radii(t.left), DissimilarityKind::OneMinusPlcc), 0.0);
    }
}

// Rank correlation is left out: near-equal plateau samples can swap ranks as
// the lag grows, which moves 1 - SRCC by a few 1e-4 in either direction.
TEST(CaseTruth, DecreasingFactorNeverDecreasesIndex) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        double previous = -1.0;
        for (int k = 99; k >= 0; --k) {
            const double f = 0.01 * k;
            const auto t = case_truth(true, f, seed);
            const double d = dissimilarity(radii(t.right), radii(t.left), DissimilarityKind::OneMinusPlcc);
            ASSERT_GE(d, previous) << "seed " << seed << " factor " << f;
            previous = d;
        }
    }
}

TEST(CaseTruth, PositiveNeedsSeverityBelowOne) {
    EXPECT_THROW(case_truth(true, 1.0, 1), ConfigError);
}

TEST(GenerateCase, BitIdenticalAcrossRuns) {
    fixtures::TempDir a("gen_a"), b("gen_b");
    CaseOptions opts;
    opts.noise_sigma = 4;
    opts.glint = true;
    opts.case_id = "x";
    opts.frame_rate = 5;
    const auto ma = generate_case(true, 0.4, 77, a.path(), opts);
    const auto mb = generate_case(true, 0.4, 77, b.path(), opts);
    EXPECT_EQ(ma.affected_eye, mb.affected_eye);
    for (const char* eye : {"right", "left"}) {
        const auto da = a.path() / "x" / eye, db = b.path() / "x" / eye;
        EXPECT_EQ(slurp(da / "truth.csv"), slurp(db / "truth.csv"));
        EXPECT_EQ(slurp(da / "meta.json"), slurp(db / "meta.json"));
        for (int i : {0, 17, 40}) EXPECT_EQ(slurp(da / frame_file_name(i)), slurp(db / frame_file_name(i)));
    }
    const auto seq = load_sequence(ma.right_dir, Eye::Right);
    EXPECT_EQ(seq.frames.size(), case_truth(true, 0.4, 77, opts).right.samples.size());
    EXPECT_DOUBLE_EQ(seq.frame_rate, 5.0);
}

TEST(CaseManifestIo, RoundTrip) {
    fixtures::TempDir dir("manifest");
    std::vector<CaseManifest> cases{{"a", true, 0.3, Eye::Right, {}, {}}, {"b", false, 1.0, Eye::Left, {}, {}}};
    write_case_manifest(cases, dir / "m.csv");
    const auto back = read_case_manifest(dir / "m.csv");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].case_id, "a");
    EXPECT_TRUE(back[0].label);
    EXPECT_EQ(back[0].severity, 0.3);
    EXPECT_EQ(back[0].affected_eye, Eye::Right);
    EXPECT_FALSE(back[1].label);
}
