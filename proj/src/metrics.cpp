#include "fstmdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fstmdc {

double mse(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw SizeError("frame dimensions differ");
  return mse(a, b, a.width(), a.height());
}

double mse(const Frame& a, const Frame& b, int width, int height) {
  if (width > a.width() || width > b.width() || height > a.height() || height > b.height()) {
    throw SizeError("evaluation region exceeds frame");
  }
  if (width <= 0 || height <= 0) throw SizeError("empty evaluation region");
  std::uint64_t sum = 0;
  for (int y = 0; y < height; ++y) {
    const auto ra = a.row(y);
    const auto rb = b.row(y);
    for (int x = 0; x < width; ++x) {
      const int d = int{ra[x]} - int{rb[x]};
      sum += static_cast<std::uint64_t>(d * d);
    }
  }
  return static_cast<double>(sum) / (static_cast<double>(width) * height);
}

double psnr_from_mse(double mse_value) noexcept {
  if (mse_value <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(255.0 * 255.0 / mse_value));
}

double psnr(const Frame& a, const Frame& b) { return psnr_from_mse(mse(a, b)); }

QualityReport sequence_psnr(const VideoSequence& reference, const VideoSequence& test) {
  if (reference.empty() || test.empty()) throw SizeError("cannot score an empty sequence");
  if (reference.size() != test.size()) throw SizeError("sequence lengths differ");
  QualityReport r;
  double psnr_sum = 0.0;
  double mse_sum = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double m = mse(reference[i], test[i]);
    const double p = psnr_from_mse(m);
    r.mse.push_back(m);
    r.psnr_db.push_back(p);
    psnr_sum += p;
    mse_sum += m;
  }
  r.mean_psnr_db = psnr_sum / static_cast<double>(reference.size());
  r.mean_mse = mse_sum / static_cast<double>(reference.size());
  return r;
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string QualityReport::summary_row() const {
  std::ostringstream os;
  os << seed << ',' << mode << ',' << format_double(loss_ratio, 2) << ",all," << format_double(mean_mse) << ','
     << format_double(mean_psnr_db) << '\n';
  return os.str();
}

std::string QualityReport::to_csv(bool header) const {
  std::ostringstream os;
  if (header) os << "seed,mode,loss_ratio,frame_index,mse,psnr_db\n";
  for (std::size_t i = 0; i < psnr_db.size(); ++i) {
    os << seed << ',' << mode << ',' << format_double(loss_ratio, 2) << ',' << i << ',' << format_double(mse[i])
       << ',' << format_double(psnr_db[i]) << '\n';
  }
  os << summary_row();
  return os.str();
}

}  // namespace fstmdc
