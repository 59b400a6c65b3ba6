#include "fstmdc/codec.hpp"

#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace fstmdc {

void CodecConfig::validate() const {
  if (mb_size <= 0 || mb_size % dct_size != 0 || mb_size > 255) {
    throw std::invalid_argument("mb_size must be a positive multiple of 8 no larger than 255");
  }
  if (quant_step < 1 || quant_step > 65535) throw std::invalid_argument("quant_step must be in [1, 65535]");
  if (gop_length < 1 || gop_length > 65535) throw std::invalid_argument("gop_length must be in [1, 65535]");
  // motion vectors travel as signed bytes
  if (search_range < 0 || search_range > 127) throw std::invalid_argument("search_range must be in [0, 127]");
}

bool EncodedFrame::fully_available() const noexcept {
  for (const auto& mb : macroblocks) {
    if (!mb.available) return false;
  }
  return true;
}

namespace {

std::uint32_t block_sad(const Block& current, const Frame& reference, int x0, int y0, std::uint32_t limit) {
  std::uint32_t sad = 0;
  const int n = current.size;
  for (int y = 0; y < n; ++y) {
    const std::uint8_t* ref = reference.row(y0 + y).data() + x0;
    const std::uint8_t* cur = &current.samples[static_cast<std::size_t>(y) * n];
    for (int x = 0; x < n; ++x) sad += static_cast<std::uint32_t>(std::abs(int{cur[x]} - int{ref[x]}));
    if (sad > limit) return sad;
  }
  return sad;
}

void check_codec_frame(const Frame& frame, const CodecConfig& cfg) {
  if (frame.width() % cfg.mb_size != 0 || frame.height() % cfg.mb_size != 0) {
    throw SizeError("frame must be padded to the macroblock grid");
  }
}

}  // namespace

MotionSearchResult motion_estimate(const Block& current, const Frame& reference, BlockPos center, int range) {
  if (current.size != center.size) throw SizeError("block size does not match search position");
  MotionSearchResult best{{0, 0}, std::numeric_limits<std::uint32_t>::max()};
  int best_l1 = std::numeric_limits<int>::max();
  bool found = false;

  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      const BlockPos cand{center.x + dx, center.y + dy, center.size};
      if (!block_inside(reference, cand)) continue;
      // equal SADs must still be compared on the tie rules, so only prune on strictly worse
      const std::uint32_t sad = block_sad(current, reference, cand.x, cand.y, found ? best.sad : UINT32_MAX);
      const int l1 = std::abs(dx) + std::abs(dy);
      // raster iteration order already resolves the final tie
      if (!found || sad < best.sad || (sad == best.sad && l1 < best_l1)) {
        best = {{dx, dy}, sad};
        best_l1 = l1;
        found = true;
      }
    }
  }
  if (!found) throw BoundsError("search center lies outside the reference");
  return best;
}

EncodedFrame encode_frame(const Frame& input, const Frame* reference, const CodecConfig& cfg) {
  cfg.validate();
  const Frame frame = pad_frame(input, cfg.mb_size);
  if (reference && (reference->width() != frame.width() || reference->height() != frame.height())) {
    throw SizeError("reference dimensions do not match frame");
  }

  EncodedFrame out;
  out.kind = reference ? FrameKind::Predicted : FrameKind::Intra;
  out.width = input.width();
  out.height = input.height();
  out.mb_size = cfg.mb_size;
  out.macroblocks.reserve(static_cast<std::size_t>(out.mb_count()));

  const int sub = cfg.mb_size / kDctSize;
  for (int my = 0; my < out.mb_rows(); ++my) {
    for (int mx = 0; mx < out.mb_cols(); ++mx) {
      const BlockPos pos{mx * cfg.mb_size, my * cfg.mb_size, cfg.mb_size};
      const Block cur = extract_block(frame, pos);

      MacroblockRecord mb;
      mb.kind = out.kind;
      Block pred(cfg.mb_size, 128);
      if (reference) {
        mb.mv = motion_estimate(cur, *reference, pos, cfg.search_range).mv;
        pred = extract_block(*reference, {pos.x + mb.mv.dx, pos.y + mb.mv.dy, cfg.mb_size});
      }

      mb.levels.reserve(static_cast<std::size_t>(sub) * sub * kDctArea);
      for (int by = 0; by < sub; ++by) {
        for (int bx = 0; bx < sub; ++bx) {
          Block8x8 residual{};
          for (int y = 0; y < kDctSize; ++y) {
            for (int x = 0; x < kDctSize; ++x) {
              const int px = bx * kDctSize + x;
              const int py = by * kDctSize + y;
              residual[y * kDctSize + x] = double{cur.at(px, py)} - double{pred.at(px, py)};
            }
          }
          const Block8x8 coeffs = dct2(residual);
          for (double c : coeffs) mb.levels.push_back(quantize(c, cfg.quant_step));
        }
      }
      out.macroblocks.push_back(std::move(mb));
    }
  }
  return out;
}

void decode_macroblock(const EncodedFrame& encoded, int mx, int my, const Frame* reference, int quant_step,
                       Frame& out) {
  const MacroblockRecord& mb = encoded.at(mx, my);
  const int n = encoded.mb_size;
  const int sub = n / kDctSize;
  if (mb.levels.size() != static_cast<std::size_t>(sub) * sub * kDctArea) {
    throw DecodeError("macroblock carries the wrong number of levels");
  }
  const BlockPos pos{mx * n, my * n, n};

  Block pred(n, 128);
  if (mb.kind == FrameKind::Predicted) {
    if (!reference) throw DecodeError("P macroblock without a reference frame");
    const BlockPos src{pos.x + mb.mv.dx, pos.y + mb.mv.dy, n};
    if (!block_inside(*reference, src)) throw DecodeError("motion vector points outside the reference");
    pred = extract_block(*reference, src);
  }

  for (int by = 0; by < sub; ++by) {
    for (int bx = 0; bx < sub; ++bx) {
      Block8x8 coeffs{};
      const std::size_t base = static_cast<std::size_t>(by * sub + bx) * kDctArea;
      for (int i = 0; i < kDctArea; ++i) coeffs[i] = dequantize(mb.levels[base + i], quant_step);
      const Block8x8 residual = idct2(coeffs);
      for (int y = 0; y < kDctSize; ++y) {
        for (int x = 0; x < kDctSize; ++x) {
          const int px = bx * kDctSize + x;
          const int py = by * kDctSize + y;
          out.at(pos.x + px, pos.y + py) = to_pixel(double{pred.at(px, py)} + residual[y * kDctSize + x]);
        }
      }
    }
  }
}

Frame decode_frame(const EncodedFrame& encoded, const Frame* reference, const CodecConfig& cfg) {
  if (encoded.kind == FrameKind::Predicted && !reference) {
    throw DecodeError("P frame requires a reference");
  }
  if (!encoded.fully_available()) {
    throw DecodeError("frame has unavailable macroblocks; conceal before decoding");
  }
  if (static_cast<int>(encoded.macroblocks.size()) != encoded.mb_count()) {
    throw DecodeError("macroblock count does not match frame dimensions");
  }
  Frame out(encoded.padded_width(), encoded.padded_height());
  if (reference && (reference->width() != out.width() || reference->height() != out.height())) {
    throw SizeError("reference dimensions do not match frame");
  }
  for (int my = 0; my < encoded.mb_rows(); ++my) {
    for (int mx = 0; mx < encoded.mb_cols(); ++mx) decode_macroblock(encoded, mx, my, reference, cfg.quant_step, out);
  }
  return out;
}

DescriptionEncoder::DescriptionEncoder(CodecConfig cfg) : cfg_(cfg) { cfg_.validate(); }

EncodedFrame DescriptionEncoder::encode(const Frame& frame) {
  const bool intra = frame_kind_for(count_, cfg_.gop_length) == FrameKind::Intra;
  const Frame* ref = intra ? nullptr : &*reference_;
  EncodedFrame ef = encode_frame(frame, ref, cfg_);
  reference_ = decode_frame(ef, ref, cfg_);
  ++count_;
  return ef;
}

const Frame& DescriptionEncoder::reconstruction() const {
  if (!reference_) throw std::logic_error("nothing encoded yet");
  return *reference_;
}

}  // namespace fstmdc
