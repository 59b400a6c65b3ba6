#pragma once

#include "fstmdc/channel.hpp"
#include "fstmdc/codec.hpp"
#include "fstmdc/container.hpp"
#include "fstmdc/receiver.hpp"
#include "fstmdc/video_model.hpp"

namespace fstmdc {

// The four stages the CLI exposes, shared with the sweep harness so that a
// sweep cell is exactly encode -> corrupt -> decode -> score.

struct EncodedPair {
  StreamContainer even;
  StreamContainer odd;
  VideoSequence reconstruction;  ///< closed-loop decoder output on a lossless channel
};

EncodedPair encode_video(const VideoSequence& source, const CodecConfig& codec);

struct CorruptedPair {
  StreamContainer even;
  StreamContainer odd;
  LossMask mask;
};

CorruptedPair corrupt_streams(const StreamContainer& even, const StreamContainer& odd, const ChannelConfig& channel);

/// Checks that the two headers describe one stream pair.
ReceivedStreams make_received(const StreamContainer& even, const StreamContainer& odd);

DecodeResult decode_streams(const StreamContainer& even, const StreamContainer& odd, const DecoderOptions& options);

}  // namespace fstmdc
