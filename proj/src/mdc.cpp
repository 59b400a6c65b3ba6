#include "fstmdc/mdc.hpp"

#include <stdexcept>
#include <string>

namespace fstmdc {

const char* to_string(DescriptionId id) noexcept { return id == DescriptionId::Even ? "even" : "odd"; }

SplitSequence split_sequence(const VideoSequence& seq) {
  if (seq.empty()) throw SizeError("cannot split an empty sequence");
  SplitSequence out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    (i % 2 == 0 ? out.even : out.odd).push_back(seq[i]);
  }
  return out;
}

MergedSequence merge_descriptions(std::span<const std::optional<Frame>> even,
                                  std::span<const std::optional<Frame>> odd) {
  if (even.size() < odd.size() || even.size() - odd.size() > 1) {
    throw SizeError("even description must hold as many frames as odd, or one more");
  }
  const std::size_t total = even.size() + odd.size();
  if (total == 0) throw SizeError("nothing to merge");

  auto slot = [&](std::size_t t) -> const std::optional<Frame>& { return t % 2 == 0 ? even[t / 2] : odd[t / 2]; };

  MergedSequence out;
  out.duplicated.reserve(total);
  for (std::size_t t = 0; t < total; ++t) {
    if (slot(t)) {
      out.frames.push_back(*slot(t));
      out.duplicated.push_back(false);
      continue;
    }
    const Frame* fill = nullptr;
    for (std::size_t d = 1; d < total && !fill; ++d) {
      if (t >= d && slot(t - d)) fill = &*slot(t - d);
      else if (t + d < total && slot(t + d)) fill = &*slot(t + d);
    }
    if (!fill) throw SizeError("both descriptions are empty");
    out.frames.push_back(*fill);
    out.duplicated.push_back(true);
  }
  return out;
}

VideoSequence merge_descriptions(const VideoSequence& even, const VideoSequence& odd) {
  std::vector<std::optional<Frame>> e(even.begin(), even.end());
  std::vector<std::optional<Frame>> o(odd.begin(), odd.end());
  return merge_descriptions(std::span<const std::optional<Frame>>(e), std::span<const std::optional<Frame>>(o))
      .frames;
}

EncodedDescriptions encode_descriptions(const VideoSequence& seq, const CodecConfig& cfg) {
  cfg.validate();
  const SplitSequence halves = split_sequence(seq);

  EncodedDescriptions out;
  out.config = cfg;
  out.width = seq.width();
  out.height = seq.height();
  out.even.id = DescriptionId::Even;
  out.odd.id = DescriptionId::Odd;

  std::vector<Frame> recon_even, recon_odd;
  auto run = [&](const VideoSequence& half, Description& desc, std::vector<Frame>& recon, std::size_t first) {
    DescriptionEncoder enc(cfg);
    for (std::size_t i = 0; i < half.size(); ++i) {
      desc.frames.push_back(enc.encode(half[i]));
      desc.source_indices.push_back(first + 2 * i);
      recon.push_back(crop_frame(enc.reconstruction(), seq.width(), seq.height()));
    }
  };
  run(halves.even, out.even, recon_even, 0);
  run(halves.odd, out.odd, recon_odd, 1);
  out.reconstruction = merge_descriptions(VideoSequence(std::move(recon_even)), VideoSequence(std::move(recon_odd)));
  return out;
}

void LossMask::record(PacketKey key, bool delivered) {
  if (!entries_.emplace(key, delivered).second) throw std::invalid_argument("packet recorded twice in loss mask");
}

std::optional<bool> LossMask::delivered(PacketKey key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::size_t LossMask::lost_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [key, ok] : entries_) n += ok ? 0 : 1;
  return n;
}

std::size_t LossMask::lost_count(DescriptionId id) const noexcept {
  std::size_t n = 0;
  for (const auto& [key, ok] : entries_) n += (!ok && key.description == id) ? 1 : 0;
  return n;
}

std::size_t macroblock_payload_size(FrameKind kind, int mb_size) noexcept {
  const std::size_t levels = static_cast<std::size_t>(mb_size) * mb_size;
  return 1 + (kind == FrameKind::Predicted ? 2 : 0) + 2 * levels;
}

std::vector<Packet> packetize(const EncodedFrame& frame, DescriptionId id, std::uint32_t frame_index) {
  if (static_cast<int>(frame.macroblocks.size()) != frame.mb_count()) {
    throw SizeError("encoded frame is incomplete");
  }
  std::vector<Packet> packets;
  packets.reserve(static_cast<std::size_t>(frame.mb_rows()));
  const std::size_t levels_per_mb = static_cast<std::size_t>(frame.mb_size) * frame.mb_size;

  for (int row = 0; row < frame.mb_rows(); ++row) {
    Packet p;
    p.description = id;
    p.frame_index = frame_index;
    p.row_index = static_cast<std::uint16_t>(row);
    p.payload.reserve(macroblock_payload_size(frame.kind, frame.mb_size) * frame.mb_cols());
    for (int mx = 0; mx < frame.mb_cols(); ++mx) {
      const MacroblockRecord& mb = frame.at(mx, row);
      if (mb.levels.size() != levels_per_mb) throw SizeError("macroblock level count mismatch");
      p.payload.push_back(static_cast<std::uint8_t>(mb.kind));
      if (mb.kind == FrameKind::Predicted) {
        p.payload.push_back(static_cast<std::uint8_t>(static_cast<std::int8_t>(mb.mv.dx)));
        p.payload.push_back(static_cast<std::uint8_t>(static_cast<std::int8_t>(mb.mv.dy)));
      }
      for (std::int16_t level : mb.levels) {
        const auto u = static_cast<std::uint16_t>(level);
        p.payload.push_back(static_cast<std::uint8_t>(u & 0xff));
        p.payload.push_back(static_cast<std::uint8_t>(u >> 8));
      }
    }
    packets.push_back(std::move(p));
  }
  return packets;
}

EncodedFrame depacketize(std::span<const Packet> packets, const FrameLayout& layout) {
  EncodedFrame out;
  out.kind = layout.kind;
  out.width = layout.width;
  out.height = layout.height;
  out.mb_size = layout.mb_size;

  const std::size_t levels_per_mb = static_cast<std::size_t>(layout.mb_size) * layout.mb_size;
  MacroblockRecord lost;
  lost.kind = layout.kind;
  lost.levels.assign(levels_per_mb, 0);
  lost.available = false;
  out.macroblocks.assign(static_cast<std::size_t>(layout.mb_cols()) * layout.mb_rows(), lost);

  std::vector<bool> seen(static_cast<std::size_t>(layout.mb_rows()), false);
  const std::size_t mb_bytes = macroblock_payload_size(layout.kind, layout.mb_size);

  for (const Packet& p : packets) {
    if (p.description != layout.description || p.frame_index != layout.frame_index) continue;
    if (p.row_index >= layout.mb_rows()) throw FormatError("packet row index beyond frame height");
    if (seen[p.row_index]) throw FormatError("duplicate packet for row " + std::to_string(p.row_index));
    seen[p.row_index] = true;
    if (p.payload.size() != mb_bytes * layout.mb_cols()) throw FormatError("packet payload has the wrong length");

    std::size_t at = 0;
    for (int mx = 0; mx < layout.mb_cols(); ++mx) {
      MacroblockRecord& mb = out.at(mx, p.row_index);
      const auto kind = static_cast<FrameKind>(p.payload[at++]);
      if (kind != layout.kind) throw FormatError("macroblock kind disagrees with stream layout");
      mb.kind = kind;
      if (kind == FrameKind::Predicted) {
        mb.mv.dx = static_cast<std::int8_t>(p.payload[at++]);
        mb.mv.dy = static_cast<std::int8_t>(p.payload[at++]);
      }
      for (std::size_t i = 0; i < levels_per_mb; ++i) {
        const auto u = static_cast<std::uint16_t>(p.payload[at] | (p.payload[at + 1] << 8));
        mb.levels[i] = static_cast<std::int16_t>(u);
        at += 2;
      }
      mb.available = true;
    }
  }
  return out;
}

}  // namespace fstmdc
