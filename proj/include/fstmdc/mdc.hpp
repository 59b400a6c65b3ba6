#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fstmdc/codec.hpp"
#include "fstmdc/video_model.hpp"

namespace fstmdc {

enum class DescriptionId : std::uint8_t { Even = 0, Odd = 1 };

constexpr DescriptionId other(DescriptionId id) noexcept {
  return id == DescriptionId::Even ? DescriptionId::Odd : DescriptionId::Even;
}

constexpr DescriptionId description_of(std::size_t display_index) noexcept {
  return display_index % 2 == 0 ? DescriptionId::Even : DescriptionId::Odd;
}

const char* to_string(DescriptionId id) noexcept;

struct SplitSequence {
  VideoSequence even;
  VideoSequence odd;
};

/// Even-indexed frames to one sub-sequence, odd-indexed to the other.
SplitSequence split_sequence(const VideoSequence& seq);

struct MergedSequence {
  VideoSequence frames;
  std::vector<bool> duplicated;  ///< true where a missing slot was filled by repetition
};

/// Interleaves e0,o0,e1,o1,... A missing slot (nullopt) repeats the nearest
/// available frame in display order, earlier frame on a tie. Requires
/// |even| - |odd| in {0, 1} and at least one frame present.
MergedSequence merge_descriptions(std::span<const std::optional<Frame>> even,
                                  std::span<const std::optional<Frame>> odd);

/// Intact-stream convenience form; exact inverse of split_sequence.
VideoSequence merge_descriptions(const VideoSequence& even, const VideoSequence& odd);

/// One independently decodable stream.
struct Description {
  DescriptionId id = DescriptionId::Even;
  std::vector<EncodedFrame> frames;
  std::vector<std::size_t> source_indices;
};

struct EncodedDescriptions {
  Description even;
  Description odd;
  CodecConfig config;
  int width = 0;
  int height = 0;
  VideoSequence reconstruction;  ///< closed-loop reconstruction in display order, display size
};

/// Splits and encodes each half with its own prediction loop.
EncodedDescriptions encode_descriptions(const VideoSequence& seq, const CodecConfig& cfg);

struct PacketKey {
  DescriptionId description = DescriptionId::Even;
  std::uint32_t frame_index = 0;
  std::uint16_t row_index = 0;

  auto operator<=>(const PacketKey&) const = default;
};

/// One macroblock row of one frame.
struct Packet {
  DescriptionId description = DescriptionId::Even;
  std::uint32_t frame_index = 0;  ///< index within the description
  std::uint16_t row_index = 0;
  std::vector<std::uint8_t> payload;

  PacketKey key() const noexcept { return {description, frame_index, row_index}; }
  bool operator==(const Packet&) const = default;
};

/// Delivered/lost record, one entry per transmitted packet.
class LossMask {
 public:
  /// Throws std::invalid_argument if the key was already recorded.
  void record(PacketKey key, bool delivered);

  std::optional<bool> delivered(PacketKey key) const;
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t lost_count() const noexcept;
  std::size_t lost_count(DescriptionId id) const noexcept;
  const std::map<PacketKey, bool>& entries() const noexcept { return entries_; }

  bool operator==(const LossMask&) const = default;

 private:
  std::map<PacketKey, bool> entries_;
};

/// Everything needed to rebuild an EncodedFrame shell when its packets are
/// missing; the frame kind comes from the GOP position.
struct FrameLayout {
  FrameKind kind = FrameKind::Intra;
  int width = 0;
  int height = 0;
  int mb_size = 16;
  DescriptionId description = DescriptionId::Even;
  std::uint32_t frame_index = 0;

  int mb_cols() const noexcept { return round_up(width, mb_size) / mb_size; }
  int mb_rows() const noexcept { return round_up(height, mb_size) / mb_size; }
};

/// Bytes one macroblock occupies in a packet payload.
std::size_t macroblock_payload_size(FrameKind kind, int mb_size) noexcept;

std::vector<Packet> packetize(const EncodedFrame& frame, DescriptionId id, std::uint32_t frame_index);

/// Rebuilds a frame from whatever rows arrived. Missing rows come back with
/// available == false and zeroed contents. Packets for other frames are
/// ignored.
EncodedFrame depacketize(std::span<const Packet> packets, const FrameLayout& layout);

}  // namespace fstmdc
