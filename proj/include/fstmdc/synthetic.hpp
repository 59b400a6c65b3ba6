#pragma once

#include <cstdint>
#include <string_view>

#include "fstmdc/video_model.hpp"

namespace fstmdc::synthetic {

/// Multi-octave value noise with a handful of hard-edged shapes, spread over
/// [16, 235]. Roughly 1/f, so it behaves like a natural image for block
/// matching and interpolation.
Frame texture(int width, int height, std::uint64_t seed);

/// Low-motion scene: fixed textured background, a textured ellipse that
/// sways by a couple of pixels, and a small region that flickers.
VideoSequence talking_head(int width, int height, int frames, std::uint64_t seed);

/// High-motion scene: the camera pans 1-3 px/frame with vertical shake over
/// a large texture while a foreground disc moves against the pan.
VideoSequence camera_pan(int width, int height, int frames, std::uint64_t seed);

/// Pure horizontal translation of `texture` by `step` pixels per frame
/// (content moves left). No noise, so motion is exactly integer.
VideoSequence uniform_pan(int width, int height, int frames, int step, std::uint64_t seed);

/// Same frame repeated.
VideoSequence still(int width, int height, int frames, std::uint64_t seed);

/// By name: "talking_head", "camera_pan", "uniform_pan" (2 px/frame), "still".
VideoSequence by_name(std::string_view name, int width, int height, int frames, std::uint64_t seed);

}  // namespace fstmdc::synthetic
