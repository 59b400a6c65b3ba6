#include "fstmdc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fstmdc/pipeline.hpp"
#include "fstmdc/video_io.hpp"

namespace fstmdc {

void ExperimentConfig::validate() const {
  codec.validate();
  channel.validate();
  fst.validate();
  if (modes.empty()) throw std::invalid_argument("at least one concealment mode is required");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (loss_ratios.empty()) throw std::invalid_argument("at least one loss ratio is required");
  for (double r : loss_ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("loss ratios must lie in [0, 1]");
  }
}

int default_thread_count() {
  if (const char* env = std::getenv("FSTMDC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const VideoSequence& source, const ExperimentConfig& cfg) {
  cfg.validate();
  if (source.empty()) throw std::invalid_argument("sweep input has no frames");

  const EncodedPair encoded = encode_video(source, cfg.codec);
  const VideoSequence& reference = cfg.reference == ScoreReference::Source ? source : encoded.reconstruction;

  SweepResult result;
  result.modes = cfg.modes;
  result.loss_ratios = cfg.loss_ratios;
  std::sort(result.loss_ratios.begin(), result.loss_ratios.end());
  result.loss_ratios.erase(std::unique(result.loss_ratios.begin(), result.loss_ratios.end()), result.loss_ratios.end());
  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  for (double r : result.loss_ratios) {
    for (ConcealmentMode m : result.modes) {
      for (std::uint64_t s : seeds) result.cells.push_back({r, m, s, {}, 0});
    }
  }

  std::vector<std::exception_ptr> errors(result.cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      SweepCell& cell = result.cells[i];
      try {
        ChannelConfig channel = cfg.channel;
        channel.loss_ratio_even = channel.loss_ratio_odd = cell.loss_ratio;
        channel.seed = cell.seed;
        const CorruptedPair rx = corrupt_streams(encoded.even, encoded.odd, channel);
        const DecodeResult decoded = decode_streams(rx.even, rx.odd, {cell.mode, cfg.fst, cfg.state_recovery});
        cell.quality = sequence_psnr(reference, decoded.frames);
        cell.quality.mode = to_string(cell.mode);
        cell.quality.loss_ratio = cell.loss_ratio;
        cell.quality.seed = cell.seed;
        cell.concealed_blocks = decoded.report.records.size();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(cfg.threads > 0 ? cfg.threads : default_thread_count(),
                                                static_cast<int>(result.cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const SweepCell& c = result.cells[i];
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw std::runtime_error("sweep cell (ratio " + format_double(c.loss_ratio, 2) + ", mode " + to_string(c.mode) +
                             ", seed " + std::to_string(c.seed) + ") failed: " + what);
  }
  return result;
}

std::vector<SummaryEntry> SweepResult::summary() const {
  std::vector<SummaryEntry> out;
  for (double r : loss_ratios) {
    for (ConcealmentMode m : modes) {
      SummaryEntry e{r, m, 0, 0.0, 0.0, 0.0};
      std::vector<double> values;
      double mse_sum = 0.0;
      for (const SweepCell& c : cells) {
        if (c.loss_ratio == r && c.mode == m) {
          values.push_back(c.quality.mean_psnr_db);
          mse_sum += c.quality.mean_mse;
        }
      }
      e.runs = values.size();
      if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        e.mean_psnr_db = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - e.mean_psnr_db) * (v - e.mean_psnr_db);
          e.sd_psnr_db = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        e.psnr_of_mean_mse = psnr_from_mse(mse_sum / static_cast<double>(values.size()));
      }
      out.push_back(e);
    }
  }
  return out;
}

SummaryEntry SweepResult::entry(double loss_ratio, ConcealmentMode mode) const {
  for (const auto& e : summary()) {
    if (std::abs(e.loss_ratio - loss_ratio) < 1e-12 && e.mode == mode) return e;
  }
  throw std::out_of_range("no sweep cell for that ratio and mode");
}

std::string SweepResult::results_csv() const {
  std::ostringstream os;
  os << "seed,mode,loss_ratio,frame_index,mse,psnr_db\n";
  for (const SweepCell& c : cells) os << c.quality.summary_row();
  return os.str();
}

std::string SweepResult::frames_csv() const {
  std::ostringstream os;
  os << "seed,mode,loss_ratio,frame_index,mse,psnr_db\n";
  for (const SweepCell& c : cells) {
    for (std::size_t i = 0; i < c.quality.psnr_db.size(); ++i) {
      os << c.seed << ',' << to_string(c.mode) << ',' << format_double(c.loss_ratio, 2) << ',' << i << ','
         << format_double(c.quality.mse[i]) << ',' << format_double(c.quality.psnr_db[i]) << '\n';
    }
  }
  return os.str();
}

std::string SweepResult::summary_csv() const {
  const auto entries = summary();
  std::ostringstream os;
  os << "ratio";
  for (ConcealmentMode m : modes) os << ',' << to_string(m) << "_mean," << to_string(m) << "_sd";
  os << '\n';
  std::size_t k = 0;
  for (double r : loss_ratios) {
    os << format_double(r, 2);
    for (std::size_t j = 0; j < modes.size(); ++j, ++k) {
      os << ',' << format_double(entries[k].mean_psnr_db) << ',' << format_double(entries[k].sd_psnr_db);
    }
    os << '\n';
  }
  return os.str();
}

std::string SweepResult::summary_long_csv() const {
  std::ostringstream os;
  os << "ratio,mode,runs,mean_psnr_db,sd_psnr_db,psnr_of_mean_mse_db\n";
  for (const auto& e : summary()) {
    os << format_double(e.loss_ratio, 2) << ',' << to_string(e.mode) << ',' << e.runs << ','
       << format_double(e.mean_psnr_db) << ',' << format_double(e.sd_psnr_db) << ','
       << format_double(e.psnr_of_mean_mse) << '\n';
  }
  return os.str();
}

std::string SweepResult::summary_table() const {
  const auto entries = summary();
  std::ostringstream os;
  os << std::left << std::setw(8) << "ratio";
  for (ConcealmentMode m : modes) os << std::setw(20) << to_string(m);
  os << '\n';
  std::size_t k = 0;
  for (double r : loss_ratios) {
    os << std::setw(8) << format_double(r * 100.0, 0) + "%";
    for (std::size_t j = 0; j < modes.size(); ++j, ++k) {
      os << std::setw(20) << (format_double(entries[k].mean_psnr_db, 2) + " +- " + format_double(entries[k].sd_psnr_db, 2));
    }
    os << '\n';
  }
  return os.str();
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", result.results_csv());
  write_file(dir / "frames.csv", result.frames_csv());
  write_file(dir / "summary.csv", result.summary_csv());
  write_file(dir / "summary_long.csv", result.summary_long_csv());
}

}  // namespace fstmdc
