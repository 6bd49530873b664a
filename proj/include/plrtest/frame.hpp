#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plrtest {

enum class Eye { Left, Right };

std::string_view eye_name(Eye eye);
/// Accepts "left"/"right" (case-insensitive); throws ConfigError otherwise.
Eye parse_eye(std::string_view text);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// 8-bit grayscale image, row-major.
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, std::uint8_t fill = 0);
    Frame(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::uint8_t at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
    void set(int x, int y, std::uint8_t value) noexcept { pixels_[index(x, y)] = value; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct FrameSequence {
    std::vector<Frame> frames;
    double frame_rate = 30.0;
    Eye eye = Eye::Right;

    /// Throws FormatError on mixed dimensions, ConfigError on a non-positive rate.
    void validate() const;
};

/// Sub-window of a parent frame. Coordinates map by a pure translation.
struct CropWindow {
    int origin_x = 0;
    int origin_y = 0;
    int width = 0;
    int height = 0;

    Point to_parent(Point local) const noexcept {
        return {local.x + origin_x, local.y + origin_y};
    }
    Point to_local(Point parent) const noexcept {
        return {parent.x - origin_x, parent.y - origin_y};
    }
};

struct CroppedFrame {
    Frame frame;
    CropWindow window;
};

Frame load_frame(const std::filesystem::path& path);
Frame parse_pgm(std::string_view bytes);
void save_frame(const Frame& frame, const std::filesystem::path& path);
std::string encode_pgm(const Frame& frame);

/// File name used for frame `index` inside a sequence directory.
std::string frame_file_name(int index);

/// Reads `frame_NNNNN.pgm` files (contiguous from 0) plus optional `meta.json`.
FrameSequence load_sequence(const std::filesystem::path& dir, Eye eye);
/// Writes frames and `meta.json` into `dir` (created if missing).
void save_sequence(const FrameSequence& sequence, const std::filesystem::path& dir);

/// Half-width, half-height (rounded up) window centred on `center`, shifted
/// back inside the frame when it would spill over a border.
CroppedFrame quarter_crop(const Frame& frame, Point center);

}  // namespace plrtest
