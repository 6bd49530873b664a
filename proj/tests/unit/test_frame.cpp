#include "plrtest/error.hpp"
#include "plrtest/frame.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

using namespace plrtest;

namespace {

std::string pgm(int w, int h, const std::string& payload) {
    return "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n" + payload;
}

}  // namespace

TEST(Pgm, ParsesBytesVerbatim) {
    const std::string bytes{'\x00', '\xff', '\x80', '\x07'};
    const Frame f = parse_pgm(pgm(2, 2, bytes));
    EXPECT_EQ(f.width(), 2);
    EXPECT_EQ(f.height(), 2);
    const std::vector<std::uint8_t> expect{0, 255, 128, 7};
    EXPECT_TRUE(std::equal(f.pixels().begin(), f.pixels().end(), expect.begin(), expect.end()));
}

TEST(Pgm, TruncatedPayloadIsFormatError) {
    EXPECT_THROW(parse_pgm(pgm(2, 2, std::string(3, '\x01'))), FormatError);
}

TEST(Pgm, ColorMagicIsFormatError) {
    EXPECT_THROW(parse_pgm("P6\n2 2\n255\n" + std::string(12, '\x01')), FormatError);
}

TEST(Pgm, HeaderCommentsAreSkipped) {
    const Frame f = parse_pgm("P5\n# made by hand\n1 1\n255\n\x2a");
    EXPECT_EQ(f.at(0, 0), 42);
}

TEST(Pgm, RoundTripIsBitExact) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 40), h = 1 + static_cast<int>(rng() % 40);
        std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h));
        for (auto& p : px) p = static_cast<std::uint8_t>(rng());
        const Frame f(w, h, px);
        const std::string encoded = encode_pgm(f);
        EXPECT_EQ(parse_pgm(encoded), f);
        EXPECT_EQ(encode_pgm(parse_pgm(encoded)), encoded);
    }
}

TEST(Pgm, FileRoundTrip) {
    fixtures::TempDir dir("pgm");
    const Frame f(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
    save_frame(f, dir / "a.pgm");
    EXPECT_EQ(load_frame(dir / "a.pgm"), f);
    EXPECT_THROW(load_frame(dir / "missing.pgm"), IoError);
}

TEST(Sequence, LoadsContiguousFrames) {
    fixtures::TempDir dir("seq");
    FrameSequence seq;
    seq.frame_rate = 12.5;
    for (int i = 0; i < 3; ++i) seq.frames.emplace_back(4, 3, static_cast<std::uint8_t>(i));
    save_sequence(seq, dir.path());
    const FrameSequence back = load_sequence(dir.path(), Eye::Left);
    ASSERT_EQ(back.frames.size(), 3u);
    EXPECT_EQ(back.frames[2], seq.frames[2]);
    EXPECT_DOUBLE_EQ(back.frame_rate, 12.5);
    EXPECT_EQ(back.eye, Eye::Left);
}

TEST(Sequence, GapIsReported) {
    fixtures::TempDir dir("gap");
    save_frame(Frame(4, 4), dir / frame_file_name(0));
    save_frame(Frame(4, 4), dir / frame_file_name(2));
    EXPECT_THROW(load_sequence(dir.path(), Eye::Right), GapError);
}

TEST(Sequence, MixedSizesAreFormatError) {
    fixtures::TempDir dir("mixed");
    save_frame(Frame(640, 480), dir / frame_file_name(0));
    save_frame(Frame(320, 240), dir / frame_file_name(1));
    EXPECT_THROW(load_sequence(dir.path(), Eye::Right), FormatError);
}

TEST(Sequence, EmptyDirectoryFails) {
    fixtures::TempDir dir("empty");
    EXPECT_THROW(load_sequence(dir.path(), Eye::Right), Error);
}

TEST(QuarterCrop, CentredWindow) {
    const auto c = quarter_crop(Frame(640, 480), {320, 240});
    EXPECT_EQ(c.window.width, 320);
    EXPECT_EQ(c.window.height, 240);
    EXPECT_EQ(c.window.origin_x, 160);
    EXPECT_EQ(c.window.origin_y, 120);
}

TEST(QuarterCrop, ClampsAtBorder) {
    const auto c = quarter_crop(Frame(640, 480), {10, 10});
    EXPECT_EQ(c.window.origin_x, 0);
    EXPECT_EQ(c.window.origin_y, 0);
    EXPECT_EQ(c.window.width, 320);
    EXPECT_EQ(c.window.height, 240);
}

TEST(QuarterCrop, OddSizeRoundsUp) {
    const auto c = quarter_crop(Frame(101, 101), {50, 50});
    EXPECT_EQ(c.window.width, 51);
    EXPECT_EQ(c.window.height, 51);
    EXPECT_EQ(c.window.origin_x, 25);
    EXPECT_EQ(c.window.origin_y, 25);
}

TEST(QuarterCrop, AreaAndPixelMappingProperties) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = 2 + static_cast<int>(rng() % 60), h = 2 + static_cast<int>(rng() % 60);
        std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h));
        for (auto& p : px) p = static_cast<std::uint8_t>(rng());
        const Frame f(w, h, px);
        const Point center{std::uniform_real_distribution<double>(-10, w + 10)(rng),
                           std::uniform_real_distribution<double>(-10, h + 10)(rng)};
        const auto c = quarter_crop(f, center);
        ASSERT_EQ(c.frame.width() * c.frame.height(), ((w + 1) / 2) * ((h + 1) / 2));
        ASSERT_GE(c.window.origin_x, 0);
        ASSERT_GE(c.window.origin_y, 0);
        ASSERT_LE(c.window.origin_x + c.window.width, w);
        ASSERT_LE(c.window.origin_y + c.window.height, h);
        for (int y = 0; y < c.frame.height(); ++y)
            for (int x = 0; x < c.frame.width(); ++x) {
                const Point p = c.window.to_parent({double(x), double(y)});
                ASSERT_EQ(c.frame.at(x, y), f.at(int(p.x), int(p.y)));
            }
    }
}

TEST(Eye, ParseIsCaseInsensitive) {
    EXPECT_EQ(parse_eye("LEFT"), Eye::Left);
    EXPECT_EQ(parse_eye("right"), Eye::Right);
    EXPECT_THROW(parse_eye("both"), ConfigError);
}
