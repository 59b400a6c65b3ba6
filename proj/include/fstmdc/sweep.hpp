#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fstmdc/channel.hpp"
#include "fstmdc/codec.hpp"
#include "fstmdc/concealment.hpp"
#include "fstmdc/metrics.hpp"
#include "fstmdc/video_model.hpp"

namespace fstmdc {

/// What a decoded sequence is scored against.
enum class ScoreReference {
  Reconstruction,  ///< lossless closed-loop decode: isolates the damage done by loss
  Source,          ///< the original input frames
};

struct ExperimentConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  CodecConfig codec;
  /// Mode, burst parameter and base seed handling come from here; the
  /// per-path ratios are overwritten by each sweep cell (equal on both paths).
  ChannelConfig channel;
  std::vector<ConcealmentMode> modes = {ConcealmentMode::Spatial, ConcealmentMode::Fst};
  std::vector<double> loss_ratios = {0.10, 0.20, 0.30, 0.40, 0.50};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  FstConfig fst;
  bool state_recovery = true;
  ScoreReference reference = ScoreReference::Reconstruction;
  /// 0: FSTMDC_THREADS if set, else hardware concurrency.
  int threads = 0;

  void validate() const;
};

struct SweepCell {
  double loss_ratio = 0.0;
  ConcealmentMode mode = ConcealmentMode::Fst;
  std::uint64_t seed = 0;
  QualityReport quality;
  std::size_t concealed_blocks = 0;
};

struct SummaryEntry {
  double loss_ratio = 0.0;
  ConcealmentMode mode = ConcealmentMode::Fst;
  std::size_t runs = 0;
  double mean_psnr_db = 0.0;  ///< mean over seeds of the per-run mean PSNR
  double sd_psnr_db = 0.0;    ///< sample standard deviation over seeds
  double psnr_of_mean_mse = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  ///< sorted by (ratio, mode as configured, seed)
  std::vector<ConcealmentMode> modes;
  std::vector<double> loss_ratios;

  std::vector<SummaryEntry> summary() const;
  SummaryEntry entry(double loss_ratio, ConcealmentMode mode) const;

  /// One row per cell: seed,mode,loss_ratio,frame_index,mse,psnr_db with
  /// frame_index "all" (sequence means).
  std::string results_csv() const;
  /// Same columns, one row per frame per cell.
  std::string frames_csv() const;
  /// Table-shaped pivot: ratio then <mode>_mean,<mode>_sd per mode.
  std::string summary_csv() const;
  /// Long format for plotting: ratio,mode,runs,mean_psnr_db,sd_psnr_db,psnr_of_mean_mse_db
  std::string summary_long_csv() const;
  /// Human-readable pivot for the terminal.
  std::string summary_table() const;
};

/// Runs every (ratio, mode, seed) cell: encode once, then for each cell
/// corrupt with channel seed = cell seed, decode, score. Cells sharing a seed
/// and ratio therefore see identical losses across modes.
SweepResult run_sweep(const VideoSequence& source, const ExperimentConfig& cfg);

/// results.csv, frames.csv, summary.csv, summary_long.csv
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

/// Worker count from FSTMDC_THREADS, falling back to hardware concurrency.
int default_thread_count();

}  // namespace fstmdc
