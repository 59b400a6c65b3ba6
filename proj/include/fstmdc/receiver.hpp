#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fstmdc/codec.hpp"
#include "fstmdc/concealment.hpp"
#include "fstmdc/mdc.hpp"

namespace fstmdc {

/// Stream-level facts the receiver knows even when every packet is lost.
struct StreamInfo {
  int width = 0;
  int height = 0;
  CodecConfig codec;
  std::uint32_t even_frames = 0;
  std::uint32_t odd_frames = 0;

  std::size_t display_frames() const noexcept { return std::size_t{even_frames} + odd_frames; }
  std::uint32_t frames(DescriptionId id) const noexcept { return id == DescriptionId::Even ? even_frames : odd_frames; }

  /// Throws FormatError when the header cannot describe a valid stream pair.
  void validate() const;
};

struct ReceivedStreams {
  StreamInfo info;
  std::vector<Packet> even;
  std::vector<Packet> odd;
};

struct DecoderOptions {
  ConcealmentMode mode = ConcealmentMode::Fst;
  FstConfig fst;
  /// Write concealed frames back as the damaged description's reference.
  /// When off, the reference keeps the raw decode with lost blocks copied
  /// from the previous reference.
  bool state_recovery = true;
};

/// Which reference each frame was predicted from.
struct DecodeTraceEntry {
  std::size_t display_index = 0;
  DescriptionId description = DescriptionId::Even;
  std::uint32_t frame_index = 0;
  FrameKind kind = FrameKind::Intra;
  std::optional<DescriptionId> reference_description;
  std::optional<std::uint32_t> reference_frame_index;
  bool reference_concealed = false;  ///< reference had been repaired by concealment
};

struct DecodeResult {
  VideoSequence frames;             ///< display order, display size
  std::vector<bool> concealed;      ///< per display frame
  ConcealmentReport report;
  std::vector<DecodeTraceEntry> trace;
};

/// Decodes both descriptions in display order with one frame of lookahead,
/// conceals lost macroblocks per `options.mode` and (by default) feeds the
/// repaired frame back into the damaged description's prediction loop.
DecodeResult decode_with_concealment(const ReceivedStreams& streams, const DecoderOptions& options);

}  // namespace fstmdc
