#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fstmdc/video_model.hpp"

namespace fstmdc {

/// Reported for identical frames so zero-loss runs stay finite.
inline constexpr double kPsnrCapDb = 99.0;

/// Mean squared difference over the whole frame. Both frames must have the
/// same dimensions; pass display-size (cropped) frames so padding is excluded.
double mse(const Frame& a, const Frame& b);

/// Restricted to the top-left width x height region.
double mse(const Frame& a, const Frame& b, int width, int height);

/// 10 log10(255^2 / mse), or kPsnrCapDb when mse is zero.
double psnr_from_mse(double mse_value) noexcept;
double psnr(const Frame& a, const Frame& b);

struct QualityReport {
  std::vector<double> mse;
  std::vector<double> psnr_db;
  double mean_psnr_db = 0.0;  ///< arithmetic mean of per-frame PSNR, capped frames included
  double mean_mse = 0.0;
  std::string mode;
  double loss_ratio = 0.0;
  std::uint64_t seed = 0;

  /// PSNR of the mean MSE, the alternative aggregate.
  double psnr_of_mean_mse() const noexcept { return psnr_from_mse(mean_mse); }

  /// seed,mode,loss_ratio,frame_index,mse,psnr_db with one row per frame and
  /// a trailing summary row whose frame_index is "all".
  std::string to_csv(bool header = true) const;
  std::string summary_row() const;
};

/// Per-frame scores plus means. Sequences must match in length and size.
QualityReport sequence_psnr(const VideoSequence& reference, const VideoSequence& test);

std::string format_double(double v, int decimals = 4);

}  // namespace fstmdc
