#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fstmdc {

/// Raised when a block or sample position falls outside a frame.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when buffer lengths or dimensions disagree.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by input parsers (Y4M, PGM, stream containers, traces).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One 8-bit luma plane, row-major.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, std::uint8_t fill = 0);
  Frame(int width, int height, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return samples_.empty(); }

  std::uint8_t at(int x, int y) const noexcept { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) noexcept { return samples_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return std::span<const std::uint8_t>(samples_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  bool operator==(const Frame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Ordered frames sharing one set of dimensions. May be empty (e.g. the odd
/// half of a one-frame split); operations that need content check for it.
class VideoSequence {
 public:
  VideoSequence() = default;
  explicit VideoSequence(std::vector<Frame> frames);

  void push_back(Frame frame);

  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  int width() const noexcept { return frames_.empty() ? 0 : frames_.front().width(); }
  int height() const noexcept { return frames_.empty() ? 0 : frames_.front().height(); }

  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  auto begin() const noexcept { return frames_.begin(); }
  auto end() const noexcept { return frames_.end(); }

  bool operator==(const VideoSequence&) const = default;

 private:
  std::vector<Frame> frames_;
};

/// Square block addressed by its top-left corner.
struct BlockPos {
  int x = 0;
  int y = 0;
  int size = 0;

  bool operator==(const BlockPos&) const = default;
};

/// size x size samples copied out of a frame, row-major.
struct Block {
  int size = 0;
  std::vector<std::uint8_t> samples;

  Block() = default;
  explicit Block(int n, std::uint8_t fill = 0)
      : size(n), samples(static_cast<std::size_t>(n) * n, fill) {}

  std::uint8_t at(int x, int y) const noexcept { return samples[static_cast<std::size_t>(y) * size + x]; }
  std::uint8_t& at(int x, int y) noexcept { return samples[static_cast<std::size_t>(y) * size + x]; }

  bool operator==(const Block&) const = default;
};

constexpr int round_up(int value, int multiple) noexcept {
  return (value + multiple - 1) / multiple * multiple;
}

bool block_inside(const Frame& frame, BlockPos pos) noexcept;

/// Grows the frame to the next multiple of `mb` in both directions by
/// replicating the nearest edge sample. Aligned frames come back unchanged.
Frame pad_frame(const Frame& frame, int mb);

/// Top-left width x height window of `frame`.
Frame crop_frame(const Frame& frame, int width, int height);

Block extract_block(const Frame& frame, BlockPos pos);

/// Returns a copy of `frame` with `block` written at `pos`.
Frame insert_block(Frame frame, BlockPos pos, const Block& block);

/// In-place variant of insert_block.
void write_block(Frame& frame, BlockPos pos, const Block& block);

}  // namespace fstmdc
