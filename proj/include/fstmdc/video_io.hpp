#pragma once

#include <filesystem>
#include <string>

#include "fstmdc/video_model.hpp"

namespace fstmdc {

/// Reads the luma plane of every frame of an 8-bit YUV4MPEG2 file.
/// Accepts C420* / C422 / C444 / Cmono (chroma is skipped). Anything else,
/// including high bit depths and interlaced-only tags, is a FormatError.
VideoSequence read_y4m(const std::filesystem::path& path);
VideoSequence parse_y4m(const std::string& bytes);

/// Writes a "Cmono" YUV4MPEG2 stream.
void write_y4m(const std::filesystem::path& path, const VideoSequence& seq, int fps_num = 30, int fps_den = 1);
std::string serialize_y4m(const VideoSequence& seq, int fps_num = 30, int fps_den = 1);

/// Binary (P5) PGM with maxval 255; '#' comments are allowed in the header.
Frame read_pgm(const std::filesystem::path& path);
Frame parse_pgm(const std::string& bytes);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

/// Dispatches on the input: a .y4m file, a single .pgm, or a directory of
/// .pgm frames taken in lexicographic filename order.
VideoSequence read_video(const std::filesystem::path& path);

/// Writes frame_0000.pgm, frame_0001.pgm, ... into `dir`.
void write_pgm_sequence(const std::filesystem::path& dir, const VideoSequence& seq);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fstmdc
