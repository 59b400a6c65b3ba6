#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fstmdc/codec.hpp"
#include "fstmdc/mdc.hpp"

namespace fstmdc {

inline constexpr std::array<char, 8> kContainerMagic = {'F', 'S', 'T', 'M', 'D', 'C', '0', '1'};
inline constexpr std::uint8_t kContainerVersion = 1;

/// One description on disk. Little-endian layout:
///
///   magic "FSTMDC01" | version u8 | width u16 | height u16 | mb_size u8 |
///   gop_length u16 | quant_step u16 | description u8 | frame_count u32 |
///   packet_count u32 | packet_count x (frame_index u32 | row u16 |
///   payload_len u32 | payload)
///
/// Lost packets are simply absent; frame_count still tells the receiver how
/// many frames the description had.
struct StreamContainer {
  int width = 0;
  int height = 0;
  CodecConfig codec;  ///< search_range is an encoder setting and is not stored
  DescriptionId description = DescriptionId::Even;
  std::uint32_t frame_count = 0;
  std::vector<Packet> packets;

  bool operator==(const StreamContainer& o) const {
    return width == o.width && height == o.height && codec.mb_size == o.codec.mb_size &&
           codec.gop_length == o.codec.gop_length && codec.quant_step == o.codec.quant_step &&
           description == o.description && frame_count == o.frame_count && packets == o.packets;
  }
};

std::string serialize(const StreamContainer& c);

/// Throws FormatError on bad magic, unknown version or truncation.
StreamContainer parse_container(const std::string& bytes);

void write_container(const std::filesystem::path& path, const StreamContainer& c);
StreamContainer read_container(const std::filesystem::path& path);

/// Packetizes every frame of a description.
StreamContainer make_container(const Description& desc, int width, int height, const CodecConfig& codec);

}  // namespace fstmdc
