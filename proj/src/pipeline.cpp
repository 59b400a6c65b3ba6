#include "fstmdc/pipeline.hpp"

namespace fstmdc {

EncodedPair encode_video(const VideoSequence& source, const CodecConfig& codec) {
  const EncodedDescriptions enc = encode_descriptions(source, codec);
  return {make_container(enc.even, enc.width, enc.height, codec), make_container(enc.odd, enc.width, enc.height, codec),
          enc.reconstruction};
}

CorruptedPair corrupt_streams(const StreamContainer& even, const StreamContainer& odd, const ChannelConfig& channel) {
  std::vector<Packet> all;
  all.reserve(even.packets.size() + odd.packets.size());
  all.insert(all.end(), even.packets.begin(), even.packets.end());
  all.insert(all.end(), odd.packets.begin(), odd.packets.end());

  TransmitResult tx = transmit(all, channel);

  CorruptedPair out{even, odd, std::move(tx.mask)};
  out.even.packets.clear();
  out.odd.packets.clear();
  for (Packet& p : tx.delivered) {
    (p.description == DescriptionId::Even ? out.even : out.odd).packets.push_back(std::move(p));
  }
  return out;
}

ReceivedStreams make_received(const StreamContainer& even, const StreamContainer& odd) {
  if (even.description != DescriptionId::Even || odd.description != DescriptionId::Odd) {
    throw FormatError("expected one even and one odd description");
  }
  if (even.width != odd.width || even.height != odd.height || even.codec.mb_size != odd.codec.mb_size ||
      even.codec.gop_length != odd.codec.gop_length || even.codec.quant_step != odd.codec.quant_step) {
    throw FormatError("description headers disagree");
  }
  ReceivedStreams r;
  r.info.width = even.width;
  r.info.height = even.height;
  r.info.codec = even.codec;
  r.info.even_frames = even.frame_count;
  r.info.odd_frames = odd.frame_count;
  r.even = even.packets;
  r.odd = odd.packets;
  r.info.validate();
  return r;
}

DecodeResult decode_streams(const StreamContainer& even, const StreamContainer& odd, const DecoderOptions& options) {
  return decode_with_concealment(make_received(even, odd), options);
}

}  // namespace fstmdc
