#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fstmdc/synthetic.hpp"
#include "fstmdc/video_io.hpp"

using namespace fstmdc;
namespace fs = std::filesystem;

namespace {

const fs::path& root() {
  static const fs::path p = [] {
    const fs::path d = fs::temp_directory_path() / "fstmdc_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

// Runs the tool with stdout/stderr captured to root()/log.txt.
int run(const std::string& args) {
  const std::string cmd = std::string("\"") + FSTMDC_CLI_PATH + "\" " + args + " > \"" +
                          (root() / "log.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return status;
}

std::string log_text() { return read_file(root() / "log.txt"); }

std::string p(const std::string& rel) { return "\"" + (root() / rel).string() + "\""; }

std::string bytes(const std::string& rel) { return read_file(root() / rel); }

void make_clip(const std::string& name, int frames) {
  write_y4m(root() / name, synthetic::camera_pan(64, 48, frames, 2));
}

}  // namespace

TEST_CASE("encode reports per-description frame counts") {
  make_clip("ten.y4m", 10);
  REQUIRE(run("encode --input " + p("ten.y4m") + " --out " + p("enc10")) == 0);
  CHECK(log_text().find("even: 5 frames") != std::string::npos);
  CHECK(log_text().find("odd: 5 frames") != std::string::npos);
  CHECK(fs::exists(root() / "enc10/even.mdc"));
  CHECK(fs::exists(root() / "enc10/reconstruction.y4m"));

  make_clip("one.y4m", 1);
  REQUIRE(run("encode --input " + p("one.y4m") + " --out " + p("enc1")) == 0);
  CHECK(log_text().find("even: 1 frames") != std::string::npos);
  CHECK(log_text().find("odd: 0 frames") != std::string::npos);

  REQUIRE(run("encode --input " + p("ten.y4m") + " --out " + p("enc10b")) == 0);
  CHECK(bytes("enc10/even.mdc") == bytes("enc10b/even.mdc"));
  CHECK(bytes("enc10/odd.mdc") == bytes("enc10b/odd.mdc"));

  CHECK(run("encode --input " + p("missing.y4m") + " --out " + p("nowhere")) != 0);
  CHECK(run("encode --input " + p("ten.y4m") + " --out " + p("bad") + " --mb-size 12") != 0);
}

TEST_CASE("corrupt") {
  make_clip("c.y4m", 12);
  REQUIRE(run("encode --input " + p("c.y4m") + " --out " + p("c_enc")) == 0);

  REQUIRE(run("corrupt --input " + p("c_enc") + " --out " + p("c_rx0") + " --loss 0") == 0);
  CHECK(bytes("c_rx0/even.mdc") == bytes("c_enc/even.mdc"));
  CHECK(bytes("c_rx0/odd.mdc") == bytes("c_enc/odd.mdc"));

  REQUIRE(run("corrupt --input " + p("c_enc") + " --out " + p("c_rxe") + " --loss-even 0.6 --loss-odd 0 --seed 3") == 0);
  CHECK(bytes("c_rxe/odd.mdc") == bytes("c_enc/odd.mdc"));
  CHECK(bytes("c_rxe/even.mdc") != bytes("c_enc/even.mdc"));

  REQUIRE(run("corrupt --input " + p("c_enc") + " --out " + p("c_a") + " --loss 0.3 --seed 11") == 0);
  REQUIRE(run("corrupt --input " + p("c_enc") + " --out " + p("c_b") + " --loss 0.3 --seed 11") == 0);
  CHECK(bytes("c_a/loss_trace.txt") == bytes("c_b/loss_trace.txt"));
  CHECK(bytes("c_a/loss_trace.txt").rfind("# seed 11 ", 0) == 0);

  CHECK(run("corrupt --input " + p("c_enc") + " --out " + p("c_x") + " --loss 0.3 --loss-mode fancy") != 0);

  fs::create_directories(root() / "c_broken");
  std::string broken = bytes("c_enc/even.mdc");
  broken[0] = 'Z';
  write_file(root() / "c_broken/even.mdc", broken);
  fs::copy_file(root() / "c_enc/odd.mdc", root() / "c_broken/odd.mdc", fs::copy_options::overwrite_existing);
  CHECK(run("corrupt --input " + p("c_broken") + " --out " + p("c_y")) != 0);
}

TEST_CASE("decode") {
  make_clip("d.y4m", 12);
  REQUIRE(run("encode --input " + p("d.y4m") + " --out " + p("d_enc")) == 0);
  for (const char* mode : {"none", "spatial", "temporal", "fst"}) {
    const std::string out = std::string("d_lossless_") + mode;
    REQUIRE(run("decode --input " + p("d_enc") + " --out " + p(out) + " --mode " + mode) == 0);
    CHECK(bytes(out + "/decoded.y4m") == bytes("d_enc/reconstruction.y4m"));
  }

  REQUIRE(run("corrupt --input " + p("d_enc") + " --out " + p("d_rx") + " --loss 0.3 --seed 2") == 0);
  for (const char* mode : {"spatial", "fst"}) {
    const std::string out = std::string("d_lossy_") + mode;
    REQUIRE(run("decode --input " + p("d_rx") + " --out " + p(out) + " --mode " + mode + " --format pgm --reference " +
                p("d_enc/reconstruction.y4m")) == 0);
    CHECK(fs::exists(root() / out / "frames/frame_0011.pgm"));
    CHECK(bytes(out + "/report.csv").rfind("frame,mb_x,mb_y,method,Ds,Dt,score\n", 0) == 0);
    CHECK(fs::exists(root() / out / "quality.csv"));
  }
  REQUIRE(run("decode --input " + p("d_rx") + " --out " + p("d_again") + " --mode fst --format pgm") == 0);
  CHECK(bytes("d_again/frames/frame_0005.pgm") == bytes("d_lossy_fst/frames/frame_0005.pgm"));
  CHECK(bytes("d_again/report.csv") == bytes("d_lossy_fst/report.csv"));

  // both first frames gone: warns, still succeeds
  REQUIRE(run("corrupt --input " + p("d_enc") + " --out " + p("d_gone") + " --loss 1") == 0);
  CHECK(run("decode --input " + p("d_gone") + " --out " + p("d_grey")) == 0);
  CHECK(log_text().find("warning") != std::string::npos);

  CHECK(run("decode --input " + p("nothing_here") + " --out " + p("d_z")) != 0);
}

TEST_CASE("sweep") {
  make_clip("s.y4m", 8);
  REQUIRE(run("sweep --input " + p("s.y4m") + " --out " + p("s_out") + " --threads 1") == 0);
  const std::string results = bytes("s_out/results.csv");
  std::size_t rows = 0;
  for (char c : results) rows += c == '\n';
  CHECK(rows == 101);
  CHECK(fs::exists(root() / "s_out/summary.csv"));
  CHECK(fs::exists(root() / "s_out/summary_long.csv"));

  REQUIRE(run("sweep --input " + p("s.y4m") + " --out " + p("s_out2") + " --threads 2") == 0);
  CHECK(bytes("s_out2/results.csv") == results);

  REQUIRE(run("sweep --input " + p("s.y4m") + " --out " + p("s_zero") + " --ratios 0 --seeds 1,2 --modes none,temporal") ==
          0);
  CHECK(bytes("s_zero/results.csv") ==
        "seed,mode,loss_ratio,frame_index,mse,psnr_db\n"
        "1,none,0.00,all,0.0000,99.0000\n2,none,0.00,all,0.0000,99.0000\n"
        "1,temporal,0.00,all,0.0000,99.0000\n2,temporal,0.00,all,0.0000,99.0000\n");

  CHECK(run("sweep --input " + p("s.y4m") + " --out " + p("s_bad") + " --ratios 1.5") != 0);
}

TEST_CASE("sweep row equals the stage commands composed by hand") {
  make_clip("m.y4m", 10);
  REQUIRE(run("sweep --input " + p("m.y4m") + " --out " + p("m_sweep") + " --ratios 0.3 --seeds 7 --modes fst") == 0);
  REQUIRE(run("encode --input " + p("m.y4m") + " --out " + p("m_enc")) == 0);
  REQUIRE(run("corrupt --input " + p("m_enc") + " --out " + p("m_rx") + " --loss 0.3 --seed 7") == 0);
  REQUIRE(run("decode --input " + p("m_rx") + " --out " + p("m_dec") + " --mode fst --reference " +
              p("m_enc/reconstruction.y4m")) == 0);
  const std::string row = bytes("m_sweep/results.csv").substr(std::string("seed,mode,loss_ratio,frame_index,mse,psnr_db\n").size());
  const std::string quality = bytes("m_dec/quality.csv");
  const std::string tail = quality.substr(quality.rfind('\n', quality.size() - 2) + 1);
  // quality.csv carries the decode's own seed/ratio fields; compare the scores
  CHECK(row.substr(row.find(",all,")) == tail.substr(tail.find(",all,")));
}
