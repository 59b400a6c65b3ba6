#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fstmdc/codec.hpp"
#include "fstmdc/mdc.hpp"
#include "fstmdc/video_model.hpp"

namespace fstmdc {

/// Raised when a concealment method has nothing to work from.
class NoSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConcealmentMode { None, Spatial, Temporal, Fst };

const char* to_string(ConcealmentMode mode) noexcept;
ConcealmentMode parse_concealment_mode(std::string_view text);

/// How one macroblock was filled.
enum class ConcealMethod { Spatial, Temporal, Blend, Freeze, Bootstrap };

const char* to_string(ConcealMethod method) noexcept;

struct FstConfig {
  /// Spatial and temporal candidates are blended when their boundary scores
  /// (mean absolute difference per border pixel) differ by at most this much.
  double blend_threshold = 2.0;
  static constexpr int boundary_width = 1;

  void validate() const;
};

/// A frame whose lost macroblocks still have to be filled. Pixels of an
/// unavailable macroblock are meaningless until it is concealed.
struct DamagedFrame {
  Frame pixels;
  std::vector<bool> mb_available;
  std::vector<bool> mb_received;  ///< as decoded, before any concealment
  int mb_size = 16;
  FrameKind kind = FrameKind::Intra;
  DescriptionId description = DescriptionId::Even;
  int sequence_index = 0;

  DamagedFrame() = default;
  DamagedFrame(Frame frame, std::vector<bool> available, int mb);

  int mb_cols() const noexcept { return pixels.width() / mb_size; }
  int mb_rows() const noexcept { return pixels.height() / mb_size; }
  bool mb_ok(int mx, int my) const noexcept { return mb_available[static_cast<std::size_t>(my) * mb_cols() + mx]; }
  bool pixel_ok(int x, int y) const noexcept { return mb_ok(x / mb_size, y / mb_size); }
  bool pixel_received(int x, int y) const noexcept {
    return mb_received[static_cast<std::size_t>(y / mb_size) * mb_cols() + x / mb_size];
  }
  bool fully_available() const noexcept;
  bool fully_lost() const noexcept;
  std::size_t lost_count() const noexcept;

  /// Writes a concealed macroblock and marks it available.
  void fill(BlockPos pos, const Block& block);
};

/// A neighbouring picture used as a concealment source. An empty
/// availability mask means every macroblock is usable.
struct ContextFrame {
  Frame frame;
  std::vector<bool> mb_available;
  int mb_size = 16;

  /// Inside the frame and every covered macroblock usable.
  bool block_usable(BlockPos pos) const noexcept;
};

using MotionField = std::vector<std::optional<MotionVector>>;

/// Temporal neighbourhood of a damaged frame at display index t: the other
/// description's frames at t-1 and t+1 and this description's frame at t-2.
/// Motion fields hold per-macroblock vectors spanning two display frames
/// (one step within a description).
struct ConcealmentContext {
  std::optional<ContextFrame> prev_other;
  std::optional<ContextFrame> next_other;
  std::optional<ContextFrame> prev_same;
  MotionField motion_field;        ///< the damaged frame's own received vectors
  MotionField other_motion_field;  ///< co-located vectors from the other description

  bool has_other() const noexcept { return prev_other.has_value() || next_other.has_value(); }
};

/// Mean absolute difference between the block's outer samples and the
/// received pixels just outside it. nullopt when no border pixel was received.
std::optional<double> boundary_score(const DamagedFrame& df, BlockPos pos, const Block& block);

/// Each lost pixel becomes the inverse-distance weighted mean of the
/// nearest available pixel up, down, left and right (directions without one
/// are skipped). A pixel with no axial support takes the mean of all
/// available pixels. Throws NoSupportError if nothing in the frame is available.
Block conceal_spatial(const DamagedFrame& df, BlockPos pos);

enum class TemporalSource { Average = 0, PrevOther = 1, NextOther = 2, PrevSame = 3 };

const char* to_string(TemporalSource source) noexcept;

struct TemporalChoice {
  Block block;
  std::optional<double> score;
  TemporalSource source = TemporalSource::PrevOther;
  MotionVector motion;  ///< two-frame-span hypothesis the winner came from
};

/// Candidate motion hypotheses for a macroblock: zero, the available 8-neighbour
/// vectors of the damaged frame and the co-located/4-neighbour vectors of the
/// other description. Deduplicated, ordered by (|dx|+|dy|, dy, dx).
std::vector<MotionVector> candidate_motion(const ConcealmentContext& ctx, int mb_cols, int mb_rows, int mx, int my);

/// Scales a two-frame-span vector to a source `distance` display frames away
/// (negative = past). Halves round away from zero.
MotionVector scale_motion(MotionVector mv, int distance) noexcept;

/// Boundary-matched temporal replacement. Each hypothesis is tried against
/// the other description's previous and next frames (scaled to their
/// temporal distance) and against their pixel average; the same
/// description's previous frame is used only when neither other-description
/// frame yields a usable block. Lowest boundary score wins; ties prefer the
/// average, then prev_other, then next_other, then the smaller hypothesis.
/// A block with no received border ranks hypotheses by the mean absolute
/// difference between the prev_other and next_other blocks they select.
TemporalChoice conceal_temporal(const DamagedFrame& df, const ConcealmentContext& ctx, BlockPos pos);

struct FstDecision {
  Block block;
  ConcealMethod method = ConcealMethod::Spatial;
  std::optional<double> spatial_score;
  std::optional<double> temporal_score;
  std::optional<double> chosen_score;
};

/// Hybrid selection: scores the spatial and temporal candidates by boundary
/// smoothness, blends them when the scores are within the threshold,
/// otherwise keeps the smoother one.
FstDecision conceal_fst(const DamagedFrame& df, const ConcealmentContext& ctx, BlockPos pos, const FstConfig& cfg);

struct ConcealmentRecord {
  int frame = 0;  ///< display index
  int mb_x = 0;
  int mb_y = 0;
  ConcealMethod method = ConcealMethod::Spatial;
  std::optional<double> spatial_score;
  std::optional<double> temporal_score;
  std::optional<double> chosen_score;
};

struct ConcealmentReport {
  std::vector<ConcealmentRecord> records;
  std::vector<int> bootstrap_frames;  ///< frames synthesised as mid-grey
  std::vector<int> recovered_frames;  ///< concealed frames written back as prediction state

  /// frame,mb_x,mb_y,method,Ds,Dt,score
  std::string to_csv() const;
};

/// Conceals every unavailable macroblock of `df` in raster order; filled
/// blocks become support for later ones. Appends one record per block.
/// Returns true if a grey bootstrap fill was needed.
bool conceal_frame(DamagedFrame& df, const ConcealmentContext& ctx, ConcealmentMode mode, const FstConfig& cfg,
                   int display_index, std::vector<ConcealmentRecord>& records);

}  // namespace fstmdc
