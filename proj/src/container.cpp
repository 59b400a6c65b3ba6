#include "fstmdc/container.hpp"

#include <algorithm>
#include <cstring>

#include "fstmdc/video_io.hpp"

namespace fstmdc {
namespace {

class Writer {
 public:
  void u8(std::uint32_t v) { out_.push_back(static_cast<char>(v & 0xff)); }
  void u16(std::uint32_t v) {
    u8(v);
    u8(v >> 8);
  }
  void u32(std::uint32_t v) {
    u16(v & 0xffff);
    u16(v >> 16);
  }
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  std::uint32_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[at_++]);
  }
  std::uint32_t u16() {
    const std::uint32_t lo = u8();
    return lo | (u8() << 8);
  }
  std::uint32_t u32() {
    const std::uint32_t lo = u16();
    return lo | (u16() << 16);
  }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> v(in_.begin() + static_cast<std::ptrdiff_t>(at_),
                                in_.begin() + static_cast<std::ptrdiff_t>(at_ + n));
    at_ += n;
    return v;
  }
  bool done() const noexcept { return at_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - at_ < n) throw FormatError("truncated stream container");
  }
  const std::string& in_;
  std::size_t at_ = 0;
};

}  // namespace

std::string serialize(const StreamContainer& c) {
  Writer w;
  w.bytes(kContainerMagic.data(), kContainerMagic.size());
  w.u8(kContainerVersion);
  w.u16(static_cast<std::uint32_t>(c.width));
  w.u16(static_cast<std::uint32_t>(c.height));
  w.u8(static_cast<std::uint32_t>(c.codec.mb_size));
  w.u16(static_cast<std::uint32_t>(c.codec.gop_length));
  w.u16(static_cast<std::uint32_t>(c.codec.quant_step));
  w.u8(static_cast<std::uint32_t>(c.description));
  w.u32(c.frame_count);
  w.u32(static_cast<std::uint32_t>(c.packets.size()));
  for (const Packet& p : c.packets) {
    if (p.description != c.description) throw FormatError("packet belongs to another description");
    w.u32(p.frame_index);
    w.u16(p.row_index);
    w.u32(static_cast<std::uint32_t>(p.payload.size()));
    w.bytes(p.payload.data(), p.payload.size());
  }
  return w.take();
}

StreamContainer parse_container(const std::string& bytes) {
  Reader r(bytes);
  const auto magic = r.bytes(kContainerMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kContainerMagic.begin())) throw FormatError("bad container magic");
  if (r.u8() != kContainerVersion) throw FormatError("unsupported container version");

  StreamContainer c;
  c.width = static_cast<int>(r.u16());
  c.height = static_cast<int>(r.u16());
  c.codec.mb_size = static_cast<int>(r.u8());
  c.codec.gop_length = static_cast<int>(r.u16());
  c.codec.quant_step = static_cast<int>(r.u16());
  const std::uint32_t desc = r.u8();
  if (desc > 1) throw FormatError("bad description id");
  c.description = static_cast<DescriptionId>(desc);
  c.frame_count = r.u32();
  try {
    c.codec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad container header: ") + e.what());
  }
  if (c.width == 0 || c.height == 0) throw FormatError("bad container dimensions");

  const std::uint32_t count = r.u32();
  c.packets.reserve(std::min<std::uint32_t>(count, 1u << 20));
  for (std::uint32_t i = 0; i < count; ++i) {
    Packet p;
    p.description = c.description;
    p.frame_index = r.u32();
    p.row_index = static_cast<std::uint16_t>(r.u16());
    p.payload = r.bytes(r.u32());
    c.packets.push_back(std::move(p));
  }
  if (!r.done()) throw FormatError("trailing bytes after container");
  return c;
}

void write_container(const std::filesystem::path& path, const StreamContainer& c) { write_file(path, serialize(c)); }

StreamContainer read_container(const std::filesystem::path& path) { return parse_container(read_file(path)); }

StreamContainer make_container(const Description& desc, int width, int height, const CodecConfig& codec) {
  StreamContainer c;
  c.width = width;
  c.height = height;
  c.codec = codec;
  c.description = desc.id;
  c.frame_count = static_cast<std::uint32_t>(desc.frames.size());
  for (std::size_t i = 0; i < desc.frames.size(); ++i) {
    auto packets = packetize(desc.frames[i], desc.id, static_cast<std::uint32_t>(i));
    std::move(packets.begin(), packets.end(), std::back_inserter(c.packets));
  }
  return c;
}

}  // namespace fstmdc
