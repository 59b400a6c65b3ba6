#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fstmdc/channel.hpp"
#include "fstmdc/container.hpp"
#include "fstmdc/metrics.hpp"
#include "fstmdc/pipeline.hpp"
#include "fstmdc/sweep.hpp"
#include "fstmdc/synthetic.hpp"
#include "fstmdc/video_io.hpp"

namespace fs = std::filesystem;
using namespace fstmdc;

namespace {

void add_codec_flags(CLI::App* cmd, CodecConfig& codec) {
  cmd->add_option("--quant-step", codec.quant_step, "Uniform quantizer step")->capture_default_str();
  cmd->add_option("--gop", codec.gop_length, "Frames per GOP within each description")->capture_default_str();
  cmd->add_option("--mb-size", codec.mb_size, "Macroblock size (multiple of 8)")->capture_default_str();
  cmd->add_option("--search-range", codec.search_range, "Full-search range in pixels")->capture_default_str();
}

std::string loss_mode_help() { return "Loss model: iid, frame or burst"; }

void write_frames(const fs::path& out, const VideoSequence& frames, const std::string& format) {
  if (format == "y4m") {
    write_y4m(out / "decoded.y4m", frames);
  } else {
    write_pgm_sequence(out / "frames", frames);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Even/odd multiple description video coding with loss concealment"};
  app.require_subcommand(1);

  // encode
  fs::path enc_in, enc_out;
  CodecConfig enc_codec;
  auto* enc = app.add_subcommand("encode", "Split a sequence into even/odd descriptions and encode both");
  enc->add_option("--input", enc_in, "Y4M file, PGM file or directory of PGM frames")->required();
  enc->add_option("--out", enc_out, "Output directory (even.mdc, odd.mdc, reconstruction.y4m)")->required();
  add_codec_flags(enc, enc_codec);

  // corrupt
  fs::path cor_in, cor_out;
  double cor_loss = 0.0;
  std::optional<double> cor_loss_even, cor_loss_odd;
  std::string cor_mode = "iid";
  double cor_burst_exit = 0.25;
  std::uint64_t cor_seed = 0;
  auto* cor = app.add_subcommand("corrupt", "Send both descriptions through two independent lossy paths");
  cor->add_option("--input", cor_in, "Directory holding even.mdc and odd.mdc")->required();
  cor->add_option("--out", cor_out, "Output directory for the received streams and loss_trace.txt")->required();
  cor->add_option("--loss", cor_loss, "Loss ratio on both paths")->capture_default_str();
  cor->add_option("--loss-even", cor_loss_even, "Override the even path's loss ratio");
  cor->add_option("--loss-odd", cor_loss_odd, "Override the odd path's loss ratio");
  cor->add_option("--loss-mode", cor_mode, loss_mode_help())->capture_default_str();
  cor->add_option("--burst-exit", cor_burst_exit, "Probability of leaving the bad state (burst mode)")->capture_default_str();
  cor->add_option("--seed", cor_seed, "Channel seed")->capture_default_str();

  // decode
  fs::path dec_in, dec_out, dec_ref;
  std::string dec_mode = "fst", dec_format = "y4m";
  FstConfig dec_fst;
  bool dec_no_recovery = false;
  auto* dec = app.add_subcommand("decode", "Decode received streams, concealing whatever was lost");
  dec->add_option("--input", dec_in, "Directory holding the received even.mdc and odd.mdc")->required();
  dec->add_option("--out", dec_out, "Output directory")->required();
  dec->add_option("--mode", dec_mode, "Concealment: none, spatial, temporal or fst")->capture_default_str();
  dec->add_option("--tau", dec_fst.blend_threshold, "Blend threshold for fst")->capture_default_str();
  dec->add_flag("--no-state-recovery", dec_no_recovery, "Keep unrepaired frames as prediction references");
  dec->add_option("--format", dec_format, "Frame output: y4m or pgm")->check(CLI::IsMember({"y4m", "pgm"}))->capture_default_str();
  dec->add_option("--reference", dec_ref, "Score the output against this sequence (writes quality.csv)");

  // sweep
  ExperimentConfig sw;
  std::string sw_mode = "iid";
  std::vector<std::string> sw_modes = {"spatial", "fst"};
  std::string sw_reference = "reconstruction";
  bool sw_no_recovery = false;
  auto* swc = app.add_subcommand("sweep", "Run every (loss ratio, mode, seed) combination and summarise PSNR");
  swc->add_option("--input", sw.input, "Input sequence")->required();
  swc->add_option("--out", sw.output_dir, "Output directory for the CSV files")->required();
  add_codec_flags(swc, sw.codec);
  swc->add_option("--ratios", sw.loss_ratios, "Loss ratios")->delimiter(',')->capture_default_str();
  swc->add_option("--seeds", sw.seeds, "Channel seeds")->delimiter(',')->capture_default_str();
  swc->add_option("--modes", sw_modes, "Concealment modes")->delimiter(',')->capture_default_str();
  swc->add_option("--loss-mode", sw_mode, loss_mode_help())->capture_default_str();
  swc->add_option("--burst-exit", sw.channel.burst_exit, "Probability of leaving the bad state")->capture_default_str();
  swc->add_option("--tau", sw.fst.blend_threshold, "Blend threshold for fst")->capture_default_str();
  swc->add_flag("--no-state-recovery", sw_no_recovery, "Keep unrepaired frames as prediction references");
  swc->add_option("--reference", sw_reference, "Score against: reconstruction or source")
      ->check(CLI::IsMember({"reconstruction", "source"}))
      ->capture_default_str();
  swc->add_option("--threads", sw.threads, "Worker threads (0: FSTMDC_THREADS or all cores)")->capture_default_str();

  // synth
  std::string syn_name = "talking_head";
  fs::path syn_out;
  int syn_w = 352, syn_h = 288, syn_frames = 100;
  std::uint64_t syn_seed = 1;
  auto* syn = app.add_subcommand("synth", "Write a synthetic test sequence as Y4M");
  syn->add_option("--name", syn_name, "talking_head, camera_pan, uniform_pan or still")->capture_default_str();
  syn->add_option("--out", syn_out, "Output .y4m file")->required();
  syn->add_option("--width", syn_w)->capture_default_str();
  syn->add_option("--height", syn_h)->capture_default_str();
  syn->add_option("--frames", syn_frames)->capture_default_str();
  syn->add_option("--seed", syn_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      enc_codec.validate();
      const VideoSequence source = read_video(enc_in);
      const EncodedPair pair = encode_video(source, enc_codec);
      fs::create_directories(enc_out);
      write_container(enc_out / "even.mdc", pair.even);
      write_container(enc_out / "odd.mdc", pair.odd);
      write_y4m(enc_out / "reconstruction.y4m", pair.reconstruction);
      std::cout << "even: " << pair.even.frame_count << " frames, " << pair.even.packets.size() << " packets\n"
                << "odd: " << pair.odd.frame_count << " frames, " << pair.odd.packets.size() << " packets\n";
    } else if (*cor) {
      ChannelConfig channel;
      channel.loss_ratio_even = cor_loss_even.value_or(cor_loss);
      channel.loss_ratio_odd = cor_loss_odd.value_or(cor_loss);
      channel.mode = parse_loss_mode(cor_mode);
      channel.burst_exit = cor_burst_exit;
      channel.seed = cor_seed;
      channel.validate();
      const StreamContainer even = read_container(cor_in / "even.mdc");
      const StreamContainer odd = read_container(cor_in / "odd.mdc");
      const CorruptedPair rx = corrupt_streams(even, odd, channel);
      fs::create_directories(cor_out);
      write_container(cor_out / "even.mdc", rx.even);
      write_container(cor_out / "odd.mdc", rx.odd);
      std::ostringstream trace;
      trace << "# seed " << channel.seed << " mode " << to_string(channel.mode) << " loss_even "
            << format_double(channel.loss_ratio_even) << " loss_odd " << format_double(channel.loss_ratio_odd);
      if (channel.mode == LossMode::Burst) trace << " burst_exit " << format_double(channel.burst_exit);
      trace << '\n' << to_trace(rx.mask);
      write_file(cor_out / "loss_trace.txt", trace.str());
      std::cout << "seed " << channel.seed << ": lost " << rx.mask.lost_count(DescriptionId::Even) << " even and "
                << rx.mask.lost_count(DescriptionId::Odd) << " odd packets of " << rx.mask.size() << '\n';
    } else if (*dec) {
      DecoderOptions options;
      options.mode = parse_concealment_mode(dec_mode);
      options.fst = dec_fst;
      options.state_recovery = !dec_no_recovery;
      options.fst.validate();
      const StreamContainer even = read_container(dec_in / "even.mdc");
      const StreamContainer odd = read_container(dec_in / "odd.mdc");
      const DecodeResult result = decode_streams(even, odd, options);
      fs::create_directories(dec_out);
      write_frames(dec_out, result.frames, dec_format);
      write_file(dec_out / "report.csv", result.report.to_csv());
      if (!result.report.bootstrap_frames.empty()) {
        std::cerr << "warning: " << result.report.bootstrap_frames.size()
                  << " frame(s) had no decodable predecessor and were filled with mid-grey\n";
      }
      std::size_t damaged = 0;
      for (bool c : result.concealed) damaged += c ? 1 : 0;
      std::cout << "decoded " << result.frames.size() << " frames, " << damaged << " concealed, "
                << result.report.records.size() << " macroblocks repaired\n";
      if (!dec_ref.empty()) {
        QualityReport q = sequence_psnr(read_video(dec_ref), result.frames);
        q.mode = to_string(options.mode);
        write_file(dec_out / "quality.csv", q.to_csv());
        std::cout << "mean PSNR " << format_double(q.mean_psnr_db, 2) << " dB\n";
      }
    } else if (*swc) {
      sw.channel.mode = parse_loss_mode(sw_mode);
      sw.modes.clear();
      for (const auto& m : sw_modes) sw.modes.push_back(parse_concealment_mode(m));
      sw.state_recovery = !sw_no_recovery;
      sw.reference = sw_reference == "source" ? ScoreReference::Source : ScoreReference::Reconstruction;
      const SweepResult result = run_sweep(read_video(sw.input), sw);
      write_sweep_outputs(result, sw.output_dir);
      std::cout << result.summary_table();
    } else if (*syn) {
      write_y4m(syn_out, synthetic::by_name(syn_name, syn_w, syn_h, syn_frames, syn_seed));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
