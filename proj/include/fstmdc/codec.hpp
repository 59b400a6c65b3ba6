#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fstmdc/dct.hpp"
#include "fstmdc/video_model.hpp"

namespace fstmdc {

struct CodecConfig {
  int mb_size = 16;
  int quant_step = 8;
  int gop_length = 15;  ///< frames per I-frame, counted within one description
  int search_range = 8;

  static constexpr int dct_size = kDctSize;

  /// Throws std::invalid_argument on an unusable combination.
  void validate() const;

  bool operator==(const CodecConfig&) const = default;
};

enum class FrameKind : std::uint8_t { Intra = 0, Predicted = 1 };

struct MotionVector {
  int dx = 0;
  int dy = 0;

  bool operator==(const MotionVector&) const = default;
};

struct MotionSearchResult {
  MotionVector mv;
  std::uint32_t sad = 0;
};

struct MacroblockRecord {
  FrameKind kind = FrameKind::Intra;
  MotionVector mv;                   ///< zero for intra
  std::vector<std::int16_t> levels;  ///< (mb/8)^2 blocks of 64 levels, raster order
  bool available = true;

  bool operator==(const MacroblockRecord&) const = default;
};

/// One coded picture. `width`/`height` are display dimensions; macroblocks
/// tile the padded picture in raster order.
struct EncodedFrame {
  FrameKind kind = FrameKind::Intra;
  int width = 0;
  int height = 0;
  int mb_size = 16;
  std::vector<MacroblockRecord> macroblocks;

  int padded_width() const noexcept { return round_up(width, mb_size); }
  int padded_height() const noexcept { return round_up(height, mb_size); }
  int mb_cols() const noexcept { return padded_width() / mb_size; }
  int mb_rows() const noexcept { return padded_height() / mb_size; }
  int mb_count() const noexcept { return mb_cols() * mb_rows(); }

  const MacroblockRecord& at(int mx, int my) const { return macroblocks.at(static_cast<std::size_t>(my) * mb_cols() + mx); }
  MacroblockRecord& at(int mx, int my) { return macroblocks.at(static_cast<std::size_t>(my) * mb_cols() + mx); }

  bool fully_available() const noexcept;

  bool operator==(const EncodedFrame&) const = default;
};

/// Raised when decoding cannot proceed (missing reference, lost data).
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive integer-pel search of `current` around `center` in
/// `reference`. Displacements that leave the reference are skipped. Ties go
/// to the smaller |dx|+|dy|, then to the earlier raster position (dy, dx).
MotionSearchResult motion_estimate(const Block& current, const Frame& reference, BlockPos center, int range);

/// Codes one frame. A null `reference` produces an I frame; otherwise a P
/// frame predicted from it. The reference must be the decoder-side
/// reconstruction (padded) for encoder and decoder to stay in lock step.
EncodedFrame encode_frame(const Frame& frame, const Frame* reference, const CodecConfig& cfg);

/// Reconstructs one macroblock into `out` (a padded-size frame).
void decode_macroblock(const EncodedFrame& encoded, int mx, int my, const Frame* reference, int quant_step,
                       Frame& out);

/// Full decode of a completely received frame. Returns the padded picture.
Frame decode_frame(const EncodedFrame& encoded, const Frame* reference, const CodecConfig& cfg);

/// Closed-loop encoder for one description: I frame every gop_length
/// frames, P frames predicted from its own previous reconstruction.
class DescriptionEncoder {
 public:
  explicit DescriptionEncoder(CodecConfig cfg);

  EncodedFrame encode(const Frame& frame);

  /// Padded reconstruction of the last encoded frame.
  const Frame& reconstruction() const;

  std::size_t frames_encoded() const noexcept { return count_; }

 private:
  CodecConfig cfg_;
  std::optional<Frame> reference_;
  std::size_t count_ = 0;
};

/// Frame kind implied by a description-local frame index.
constexpr FrameKind frame_kind_for(std::size_t index_in_description, int gop_length) noexcept {
  return index_in_description % static_cast<std::size_t>(gop_length) == 0 ? FrameKind::Intra
                                                                           : FrameKind::Predicted;
}

}  // namespace fstmdc
