#include "fstmdc/video_model.hpp"

#include <algorithm>

namespace fstmdc {

Frame::Frame(int width, int height, std::uint8_t fill) {
  if (width < 0 || height < 0) throw SizeError("negative frame dimensions");
  width_ = width;
  height_ = height;
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> samples) {
  if (width < 0 || height < 0) throw SizeError("negative frame dimensions");
  if (samples.size() != static_cast<std::size_t>(width) * height) {
    throw SizeError("frame sample count " + std::to_string(samples.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  width_ = width;
  height_ = height;
  samples_ = std::move(samples);
}

VideoSequence::VideoSequence(std::vector<Frame> frames) {
  frames_.reserve(frames.size());
  for (auto& f : frames) push_back(std::move(f));
}

void VideoSequence::push_back(Frame frame) {
  if (!frames_.empty() &&
      (frame.width() != frames_.front().width() || frame.height() != frames_.front().height())) {
    throw SizeError("sequence frames must share dimensions");
  }
  frames_.push_back(std::move(frame));
}

bool block_inside(const Frame& frame, BlockPos pos) noexcept {
  return pos.size > 0 && pos.x >= 0 && pos.y >= 0 && pos.x + pos.size <= frame.width() &&
         pos.y + pos.size <= frame.height();
}

Frame pad_frame(const Frame& frame, int mb) {
  if (mb <= 0) throw SizeError("macroblock size must be positive");
  if (frame.empty()) throw SizeError("cannot pad an empty frame");
  const int w = round_up(frame.width(), mb);
  const int h = round_up(frame.height(), mb);
  if (w == frame.width() && h == frame.height()) return frame;

  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto src = frame.row(std::min(y, frame.height() - 1));
    std::uint8_t* dst = &out.at(0, y);
    std::copy(src.begin(), src.end(), dst);
    std::fill(dst + frame.width(), dst + w, src.back());
  }
  return out;
}

Frame crop_frame(const Frame& frame, int width, int height) {
  if (width > frame.width() || height > frame.height() || width < 0 || height < 0) {
    throw BoundsError("crop window exceeds frame");
  }
  if (width == frame.width() && height == frame.height()) return frame;
  Frame out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto src = frame.row(y);
    std::copy(src.begin(), src.begin() + width, &out.at(0, y));
  }
  return out;
}

Block extract_block(const Frame& frame, BlockPos pos) {
  if (!block_inside(frame, pos)) throw BoundsError("block outside frame");
  Block block(pos.size);
  for (int y = 0; y < pos.size; ++y) {
    const std::uint8_t* src = frame.row(pos.y + y).data() + pos.x;
    std::copy(src, src + pos.size, &block.at(0, y));
  }
  return block;
}

void write_block(Frame& frame, BlockPos pos, const Block& block) {
  if (block.size != pos.size ||
      block.samples.size() != static_cast<std::size_t>(block.size) * block.size) {
    throw SizeError("block size does not match position");
  }
  if (!block_inside(frame, pos)) throw BoundsError("block outside frame");
  for (int y = 0; y < pos.size; ++y) {
    const std::uint8_t* src = &block.samples[static_cast<std::size_t>(y) * block.size];
    std::copy(src, src + pos.size, &frame.at(pos.x, pos.y + y));
  }
}

Frame insert_block(Frame frame, BlockPos pos, const Block& block) {
  write_block(frame, pos, block);
  return frame;
}

}  // namespace fstmdc
