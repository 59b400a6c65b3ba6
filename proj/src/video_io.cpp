#include "fstmdc/video_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fstmdc {
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

namespace {

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError(std::string("bad ") + what);
  return v;
}

// Bytes of chroma that follow each luma plane.
std::size_t chroma_bytes(std::string_view colorspace, int w, int h) {
  const std::size_t cw = static_cast<std::size_t>((w + 1) / 2);
  const std::size_t ch = static_cast<std::size_t>((h + 1) / 2);
  if (colorspace == "mono") return 0;
  if (colorspace == "420" || colorspace == "420jpeg" || colorspace == "420paldv" || colorspace == "420mpeg2") {
    return 2 * cw * ch;
  }
  if (colorspace == "422") return 2 * cw * static_cast<std::size_t>(h);
  if (colorspace == "444") return 2 * static_cast<std::size_t>(w) * h;
  throw FormatError("unsupported Y4M colorspace C" + std::string(colorspace));
}

}  // namespace

VideoSequence parse_y4m(const std::string& bytes) {
  const std::size_t eol = bytes.find('\n');
  if (eol == std::string::npos || bytes.rfind("YUV4MPEG2", 0) != 0) throw FormatError("not a YUV4MPEG2 stream");

  int w = -1, h = -1;
  std::string colorspace = "420jpeg";
  std::istringstream header(bytes.substr(9, eol - 9));
  std::string tag;
  while (header >> tag) {
    const std::string_view v = std::string_view(tag).substr(1);
    switch (tag[0]) {
      case 'W': w = parse_int(v, "Y4M width"); break;
      case 'H': h = parse_int(v, "Y4M height"); break;
      case 'C': colorspace = std::string(v); break;
      default: break;  // F, I, A, X carry nothing we use
    }
  }
  if (w <= 0 || h <= 0) throw FormatError("Y4M header lacks dimensions");
  const std::size_t luma = static_cast<std::size_t>(w) * h;
  const std::size_t chroma = chroma_bytes(colorspace, w, h);

  VideoSequence seq;
  std::size_t at = eol + 1;
  while (at < bytes.size()) {
    const std::size_t line_end = bytes.find('\n', at);
    if (line_end == std::string::npos || bytes.compare(at, 5, "FRAME") != 0) throw FormatError("bad Y4M frame marker");
    at = line_end + 1;
    if (bytes.size() - at < luma + chroma) throw FormatError("truncated Y4M frame");
    std::vector<std::uint8_t> samples(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(at + luma));
    seq.push_back(Frame(w, h, std::move(samples)));
    at += luma + chroma;
  }
  if (seq.empty()) throw FormatError("Y4M stream has no frames");
  return seq;
}

VideoSequence read_y4m(const fs::path& path) { return parse_y4m(read_file(path)); }

std::string serialize_y4m(const VideoSequence& seq, int fps_num, int fps_den) {
  std::string out = "YUV4MPEG2 W" + std::to_string(seq.width()) + " H" + std::to_string(seq.height()) + " F" +
                    std::to_string(fps_num) + ":" + std::to_string(fps_den) + " Ip A1:1 Cmono\n";
  for (const Frame& f : seq) {
    out += "FRAME\n";
    out.append(reinterpret_cast<const char*>(f.samples().data()), f.samples().size());
  }
  return out;
}

void write_y4m(const fs::path& path, const VideoSequence& seq, int fps_num, int fps_den) {
  write_file(path, serialize_y4m(seq, fps_num, fps_den));
}

Frame parse_pgm(const std::string& bytes) {
  std::size_t at = 0;
  auto skip_space = [&] {
    while (at < bytes.size()) {
      if (bytes[at] == '#') {
        while (at < bytes.size() && bytes[at] != '\n') ++at;
      } else if (std::isspace(static_cast<unsigned char>(bytes[at]))) {
        ++at;
      } else {
        break;
      }
    }
  };
  auto token = [&] {
    skip_space();
    const std::size_t start = at;
    while (at < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[at])) && bytes[at] != '#') ++at;
    return std::string_view(bytes).substr(start, at - start);
  };

  if (token() != "P5") throw FormatError("only binary PGM (P5) is supported");
  const int w = parse_int(token(), "PGM width");
  const int h = parse_int(token(), "PGM height");
  const int maxval = parse_int(token(), "PGM maxval");
  if (w <= 0 || h <= 0) throw FormatError("bad PGM dimensions");
  if (maxval != 255) throw FormatError("only 8-bit PGM (maxval 255) is supported");
  if (at >= bytes.size()) throw FormatError("truncated PGM");
  ++at;  // single whitespace before raster
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - at < n) throw FormatError("truncated PGM raster");
  return Frame(w, h,
               std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                                         bytes.begin() + static_cast<std::ptrdiff_t>(at + n)));
}

Frame read_pgm(const fs::path& path) { return parse_pgm(read_file(path)); }

void write_pgm(const fs::path& path, const Frame& frame) {
  std::string out = "P5\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(frame.samples().data()), frame.samples().size());
  write_file(path, out);
}

VideoSequence read_video(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw FormatError("no .pgm frames in " + path.string());
    std::sort(files.begin(), files.end());
    VideoSequence seq;
    for (const auto& f : files) seq.push_back(read_pgm(f));
    return seq;
  }
  const std::string ext = path.extension().string();
  if (ext == ".y4m") return read_y4m(path);
  if (ext == ".pgm") return VideoSequence({read_pgm(path)});
  throw FormatError("unsupported input " + path.string() + " (expected .y4m, .pgm or a directory of .pgm)");
}

void write_pgm_sequence(const fs::path& dir, const VideoSequence& seq) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.pgm", i);
    write_pgm(dir / name, seq[i]);
  }
}

}  // namespace fstmdc
