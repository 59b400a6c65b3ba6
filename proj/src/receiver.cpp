#include "fstmdc/receiver.hpp"

#include <map>
#include <string>

namespace fstmdc {

void StreamInfo::validate() const {
  try {
    codec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad stream header: ") + e.what());
  }
  if (width <= 0 || height <= 0 || width > 65535 || height > 65535) throw FormatError("bad stream dimensions");
  if (even_frames < odd_frames || even_frames - odd_frames > 1) {
    throw FormatError("even/odd frame counts are inconsistent");
  }
  if (display_frames() == 0) throw FormatError("stream holds no frames");
}

namespace {

struct DescriptionState {
  std::optional<Frame> reference;  // padded
  std::optional<std::uint32_t> reference_index;
  bool reference_concealed = false;
};

struct RawFrame {
  DamagedFrame damaged;
  MotionField motion;
};

using PacketGroups = std::map<std::uint32_t, std::vector<Packet>>;

PacketGroups group_packets(const std::vector<Packet>& packets, DescriptionId id, std::uint32_t frame_count) {
  PacketGroups groups;
  for (const Packet& p : packets) {
    if (p.description != id) throw FormatError("packet filed under the wrong description");
    if (p.frame_index >= frame_count) throw FormatError("packet frame index beyond stream length");
    groups[p.frame_index].push_back(p);
  }
  return groups;
}

}  // namespace

DecodeResult decode_with_concealment(const ReceivedStreams& streams, const DecoderOptions& options) {
  const StreamInfo& info = streams.info;
  info.validate();
  options.fst.validate();

  const CodecConfig& codec = info.codec;
  const int mb = codec.mb_size;
  const int padded_w = round_up(info.width, mb);
  const int padded_h = round_up(info.height, mb);
  const std::size_t total = info.display_frames();

  const PacketGroups groups[2] = {group_packets(streams.even, DescriptionId::Even, info.even_frames),
                                  group_packets(streams.odd, DescriptionId::Odd, info.odd_frames)};
  DescriptionState states[2];
  DecodeResult result;

  auto decode_raw = [&](std::size_t t) {
    const DescriptionId d = description_of(t);
    const auto k = static_cast<std::uint32_t>(t / 2);
    const FrameLayout layout{frame_kind_for(k, codec.gop_length), info.width, info.height, mb, d, k};

    const auto& g = groups[static_cast<int>(d)];
    const auto it = g.find(k);
    const std::span<const Packet> packets =
        it == g.end() ? std::span<const Packet>{} : std::span<const Packet>(it->second);
    const EncodedFrame ef = depacketize(packets, layout);

    DescriptionState& st = states[static_cast<int>(d)];
    const Frame* ref = nullptr;
    if (layout.kind == FrameKind::Predicted) {
      if (!st.reference) throw DecodeError("P frame without a reference");
      ref = &*st.reference;
    }

    Frame pixels(padded_w, padded_h);
    std::vector<bool> available(ef.macroblocks.size());
    MotionField motion(ef.macroblocks.size());
    for (int my = 0; my < ef.mb_rows(); ++my) {
      for (int mx = 0; mx < ef.mb_cols(); ++mx) {
        const std::size_t i = static_cast<std::size_t>(my) * ef.mb_cols() + mx;
        if (!ef.macroblocks[i].available) continue;
        decode_macroblock(ef, mx, my, ref, codec.quant_step, pixels);
        available[i] = true;
        if (ef.kind == FrameKind::Predicted) motion[i] = ef.macroblocks[i].mv;
      }
    }

    DecodeTraceEntry entry{t, d, k, layout.kind, {}, {}, false};
    if (ref) {
      entry.reference_description = d;
      entry.reference_frame_index = st.reference_index;
      entry.reference_concealed = st.reference_concealed;
    }
    result.trace.push_back(entry);

    RawFrame raw{DamagedFrame(std::move(pixels), std::move(available), mb), std::move(motion)};
    raw.damaged.kind = layout.kind;
    raw.damaged.description = d;
    raw.damaged.sequence_index = static_cast<int>(t);
    return raw;
  };

  const bool lookahead = options.mode == ConcealmentMode::Temporal || options.mode == ConcealmentMode::Fst;
  std::optional<RawFrame> ahead;
  std::optional<Frame> prev1, prev2;  // final frames at t-1 and t-2
  MotionField prev1_motion;

  for (std::size_t t = 0; t < total; ++t) {
    RawFrame cur = ahead ? std::move(*ahead) : decode_raw(t);
    ahead.reset();
    const DescriptionId d = description_of(t);
    const bool concealed = !cur.damaged.fully_available();
    std::optional<DamagedFrame> raw_copy;

    if (concealed) {
      if (!options.state_recovery) raw_copy = cur.damaged;

      ConcealmentContext ctx;
      if (prev1) ctx.prev_other = ContextFrame{*prev1, {}, mb};
      if (prev2) ctx.prev_same = ContextFrame{*prev2, {}, mb};
      ctx.motion_field = cur.motion;
      ctx.other_motion_field = prev1_motion;
      if (lookahead && t + 1 < total) {
        ahead = decode_raw(t + 1);
        if (!ahead->damaged.fully_lost()) {
          ctx.next_other = ContextFrame{ahead->damaged.pixels, ahead->damaged.mb_available, mb};
        }
        // the next frame's vectors span this instant; prefer them
        ctx.other_motion_field.resize(ahead->motion.size());
        for (std::size_t i = 0; i < ahead->motion.size(); ++i) {
          if (ahead->motion[i]) ctx.other_motion_field[i] = ahead->motion[i];
        }
      }
      if (conceal_frame(cur.damaged, ctx, options.mode, options.fst, static_cast<int>(t), result.report.records)) {
        result.report.bootstrap_frames.push_back(static_cast<int>(t));
      }
    }

    DescriptionState& st = states[static_cast<int>(d)];
    if (!concealed || options.state_recovery) {
      st.reference = cur.damaged.pixels;
      st.reference_concealed = concealed;
      if (concealed) result.report.recovered_frames.push_back(static_cast<int>(t));
    } else {
      Frame ref = std::move(raw_copy->pixels);
      for (int my = 0; my < raw_copy->mb_rows(); ++my) {
        for (int mx = 0; mx < raw_copy->mb_cols(); ++mx) {
          if (raw_copy->mb_ok(mx, my)) continue;
          const BlockPos pos{mx * mb, my * mb, mb};
          write_block(ref, pos, st.reference ? extract_block(*st.reference, pos) : Block(mb, 128));
        }
      }
      st.reference = std::move(ref);
      st.reference_concealed = false;
    }
    st.reference_index = static_cast<std::uint32_t>(t / 2);

    result.frames.push_back(crop_frame(cur.damaged.pixels, info.width, info.height));
    result.concealed.push_back(concealed);
    prev1_motion = std::move(cur.motion);
    prev2 = std::move(prev1);
    prev1 = std::move(cur.damaged.pixels);
  }
  return result;
}

}  // namespace fstmdc
