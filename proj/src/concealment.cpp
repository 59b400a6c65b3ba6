#include "fstmdc/concealment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <tuple>

#include "fstmdc/dct.hpp"

namespace fstmdc {

const char* to_string(ConcealmentMode mode) noexcept {
  switch (mode) {
    case ConcealmentMode::None: return "none";
    case ConcealmentMode::Spatial: return "spatial";
    case ConcealmentMode::Temporal: return "temporal";
    case ConcealmentMode::Fst: return "fst";
  }
  return "?";
}

ConcealmentMode parse_concealment_mode(std::string_view text) {
  if (text == "none") return ConcealmentMode::None;
  if (text == "spatial") return ConcealmentMode::Spatial;
  if (text == "temporal") return ConcealmentMode::Temporal;
  if (text == "fst") return ConcealmentMode::Fst;
  throw std::invalid_argument("unknown concealment mode '" + std::string(text) + "'");
}

const char* to_string(ConcealMethod method) noexcept {
  switch (method) {
    case ConcealMethod::Spatial: return "spatial";
    case ConcealMethod::Temporal: return "temporal";
    case ConcealMethod::Blend: return "blend";
    case ConcealMethod::Freeze: return "freeze";
    case ConcealMethod::Bootstrap: return "bootstrap";
  }
  return "?";
}

const char* to_string(TemporalSource source) noexcept {
  switch (source) {
    case TemporalSource::Average: return "average";
    case TemporalSource::PrevOther: return "prev_other";
    case TemporalSource::NextOther: return "next_other";
    case TemporalSource::PrevSame: return "prev_same";
  }
  return "?";
}

void FstConfig::validate() const {
  if (!(blend_threshold >= 0.0)) throw std::invalid_argument("blend threshold must be >= 0");
}

DamagedFrame::DamagedFrame(Frame frame, std::vector<bool> available, int mb)
    : pixels(std::move(frame)), mb_available(std::move(available)), mb_received(mb_available), mb_size(mb) {
  if (mb <= 0 || pixels.width() % mb != 0 || pixels.height() % mb != 0) {
    throw SizeError("damaged frame must be padded to the macroblock grid");
  }
  if (mb_available.size() != static_cast<std::size_t>(mb_cols()) * mb_rows()) {
    throw SizeError("availability mask does not match macroblock grid");
  }
}

bool DamagedFrame::fully_available() const noexcept {
  return std::all_of(mb_available.begin(), mb_available.end(), [](bool b) { return b; });
}

bool DamagedFrame::fully_lost() const noexcept {
  return std::none_of(mb_available.begin(), mb_available.end(), [](bool b) { return b; });
}

std::size_t DamagedFrame::lost_count() const noexcept {
  return static_cast<std::size_t>(std::count(mb_available.begin(), mb_available.end(), false));
}

void DamagedFrame::fill(BlockPos pos, const Block& block) {
  if (pos.size != mb_size || pos.x % mb_size != 0 || pos.y % mb_size != 0) {
    throw BoundsError("fill expects a macroblock-aligned position");
  }
  write_block(pixels, pos, block);
  mb_available[static_cast<std::size_t>(pos.y / mb_size) * mb_cols() + pos.x / mb_size] = true;
}

bool ContextFrame::block_usable(BlockPos pos) const noexcept {
  if (!block_inside(frame, pos)) return false;
  if (mb_available.empty()) return true;
  const int cols = frame.width() / mb_size;
  for (int my = pos.y / mb_size; my <= (pos.y + pos.size - 1) / mb_size; ++my) {
    for (int mx = pos.x / mb_size; mx <= (pos.x + pos.size - 1) / mb_size; ++mx) {
      if (!mb_available[static_cast<std::size_t>(my) * cols + mx]) return false;
    }
  }
  return true;
}

namespace {

template <class Usable>
std::optional<double> border_mad(const DamagedFrame& df, BlockPos pos, const Block& block, Usable usable) {
  const Frame& f = df.pixels;
  const int n = pos.size;
  long sum = 0;
  long count = 0;
  auto add = [&](int x, int y, std::uint8_t inner) {
    if (usable(x, y)) {
      sum += std::abs(int{inner} - int{f.at(x, y)});
      ++count;
    }
  };
  if (pos.y > 0) {
    for (int i = 0; i < n; ++i) add(pos.x + i, pos.y - 1, block.at(i, 0));
  }
  if (pos.y + n < f.height()) {
    for (int i = 0; i < n; ++i) add(pos.x + i, pos.y + n, block.at(i, n - 1));
  }
  if (pos.x > 0) {
    for (int j = 0; j < n; ++j) add(pos.x - 1, pos.y + j, block.at(0, j));
  }
  if (pos.x + n < f.width()) {
    for (int j = 0; j < n; ++j) add(pos.x + n, pos.y + j, block.at(n - 1, j));
  }
  if (count == 0) return std::nullopt;
  return static_cast<double>(sum) / static_cast<double>(count);
}

}  // namespace

std::optional<double> boundary_score(const DamagedFrame& df, BlockPos pos, const Block& block) {
  return border_mad(df, pos, block, [&](int x, int y) { return df.pixel_received(x, y); });
}

namespace {

// Nearest available coordinate along one axis, jumping whole macroblocks.
int scan_left(const DamagedFrame& df, int x, int y) {
  while (x >= 0) {
    if (df.pixel_ok(x, y)) return x;
    x = (x / df.mb_size) * df.mb_size - 1;
  }
  return -1;
}

int scan_right(const DamagedFrame& df, int x, int y) {
  while (x < df.pixels.width()) {
    if (df.pixel_ok(x, y)) return x;
    x = (x / df.mb_size + 1) * df.mb_size;
  }
  return -1;
}

int scan_up(const DamagedFrame& df, int x, int y) {
  while (y >= 0) {
    if (df.pixel_ok(x, y)) return y;
    y = (y / df.mb_size) * df.mb_size - 1;
  }
  return -1;
}

int scan_down(const DamagedFrame& df, int x, int y) {
  while (y < df.pixels.height()) {
    if (df.pixel_ok(x, y)) return y;
    y = (y / df.mb_size + 1) * df.mb_size;
  }
  return -1;
}

std::uint8_t available_mean(const DamagedFrame& df) {
  double sum = 0.0;
  long count = 0;
  for (int y = 0; y < df.pixels.height(); ++y) {
    for (int x = 0; x < df.pixels.width(); ++x) {
      if (df.pixel_ok(x, y)) {
        sum += df.pixels.at(x, y);
        ++count;
      }
    }
  }
  return to_pixel(sum / static_cast<double>(count));
}

double mean_abs_diff(const Block& a, const Block& b) {
  long sum = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) sum += std::abs(int{a.samples[i]} - int{b.samples[i]});
  return static_cast<double>(sum) / static_cast<double>(a.samples.size());
}

Block blend(const Block& a, const Block& b) {
  Block out(a.size);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = static_cast<std::uint8_t>((a.samples[i] + b.samples[i] + 1) / 2);
  }
  return out;
}

Block grey_block(int n) { return Block(n, 128); }

}  // namespace

Block conceal_spatial(const DamagedFrame& df, BlockPos pos) {
  if (!block_inside(df.pixels, pos)) throw BoundsError("block outside frame");
  if (df.fully_lost()) throw NoSupportError("no available pixels for spatial interpolation");

  const int n = pos.size;
  std::vector<int> left(n), right(n), up(static_cast<std::size_t>(n) * n), down(static_cast<std::size_t>(n) * n);
  Block out(n);
  std::optional<std::uint8_t> fallback;

  // up/down per column, as y advances through the block
  std::vector<int> col_up(n), col_down(n);
  for (int i = 0; i < n; ++i) {
    const int x = pos.x + i;
    int u = scan_up(df, x, pos.y - 1);
    for (int j = 0; j < n; ++j) {
      const int y = pos.y + j;
      if (j > 0 && df.pixel_ok(x, y - 1)) u = y - 1;
      up[static_cast<std::size_t>(j) * n + i] = u;
    }
    int d = scan_down(df, x, pos.y + n);
    for (int j = n - 1; j >= 0; --j) {
      const int y = pos.y + j;
      if (j < n - 1 && df.pixel_ok(x, y + 1)) d = y + 1;
      down[static_cast<std::size_t>(j) * n + i] = d;
    }
  }

  for (int j = 0; j < n; ++j) {
    const int y = pos.y + j;
    int l = scan_left(df, pos.x - 1, y);
    for (int i = 0; i < n; ++i) {
      if (i > 0 && df.pixel_ok(pos.x + i - 1, y)) l = pos.x + i - 1;
      left[i] = l;
    }
    int r = scan_right(df, pos.x + n, y);
    for (int i = n - 1; i >= 0; --i) {
      if (i < n - 1 && df.pixel_ok(pos.x + i + 1, y)) r = pos.x + i + 1;
      right[i] = r;
    }

    for (int i = 0; i < n; ++i) {
      const int x = pos.x + i;
      if (df.pixel_ok(x, y)) {
        out.at(i, j) = df.pixels.at(x, y);
        continue;
      }
      double num = 0.0;
      double den = 0.0;
      auto take = [&](int sx, int sy, int dist) {
        const double w = 1.0 / dist;
        num += w * df.pixels.at(sx, sy);
        den += w;
      };
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      if (up[k] >= 0) take(x, up[k], y - up[k]);
      if (down[k] >= 0) take(x, down[k], down[k] - y);
      if (left[i] >= 0) take(left[i], y, x - left[i]);
      if (right[i] >= 0) take(right[i], y, right[i] - x);
      if (den > 0.0) {
        out.at(i, j) = to_pixel(num / den);
      } else {
        if (!fallback) fallback = available_mean(df);
        out.at(i, j) = *fallback;
      }
    }
  }
  return out;
}

MotionVector scale_motion(MotionVector mv, int distance) noexcept {
  auto s = [distance](int v) { return static_cast<int>(std::lround(-v * distance / 2.0)); };
  return {s(mv.dx), s(mv.dy)};
}

std::vector<MotionVector> candidate_motion(const ConcealmentContext& ctx, int mb_cols, int mb_rows, int mx, int my) {
  std::vector<MotionVector> out{{0, 0}};
  auto from = [&](const MotionField& field, int x, int y) {
    if (x < 0 || y < 0 || x >= mb_cols || y >= mb_rows) return;
    const std::size_t i = static_cast<std::size_t>(y) * mb_cols + x;
    if (i < field.size() && field[i]) out.push_back(*field[i]);
  };
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) from(ctx.motion_field, mx + dx, my + dy);
  }
  from(ctx.other_motion_field, mx, my);
  from(ctx.other_motion_field, mx, my - 1);
  from(ctx.other_motion_field, mx - 1, my);
  from(ctx.other_motion_field, mx + 1, my);
  from(ctx.other_motion_field, mx, my + 1);

  auto key = [](const MotionVector& v) { return std::make_tuple(std::abs(v.dx) + std::abs(v.dy), v.dy, v.dx); };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TemporalChoice conceal_temporal(const DamagedFrame& df, const ConcealmentContext& ctx, BlockPos pos) {
  if (!block_inside(df.pixels, pos)) throw BoundsError("block outside frame");
  const std::vector<MotionVector> hyps =
      candidate_motion(ctx, df.mb_cols(), df.mb_rows(), pos.x / df.mb_size, pos.y / df.mb_size);

  std::optional<TemporalChoice> best;
  std::size_t best_hyp = 0;
  double best_rank = 0.0;
  // Without a received border every candidate is unscored; hypotheses are
  // then ranked by how well the previous and next pictures agree under them.
  auto consider = [&](Block block, TemporalSource src, std::size_t hyp, std::optional<double> agreement) {
    const auto score = boundary_score(df, pos, block);
    const double rank = score ? *score : agreement.value_or(std::numeric_limits<double>::max());
    const bool take = !best || rank < best_rank ||
                      (rank == best_rank && (static_cast<int>(src) < static_cast<int>(best->source) ||
                                             (src == best->source && hyp < best_hyp)));
    if (take) {
      best = TemporalChoice{std::move(block), score, src, hyps[hyp]};
      best_hyp = hyp;
      best_rank = rank;
    }
  };
  auto fetch = [&](const ContextFrame& cf, MotionVector off) -> std::optional<Block> {
    const BlockPos src{pos.x + off.dx, pos.y + off.dy, pos.size};
    if (!cf.block_usable(src)) return std::nullopt;
    return extract_block(cf.frame, src);
  };

  for (std::size_t h = 0; h < hyps.size(); ++h) {
    std::optional<Block> prev, next;
    if (ctx.prev_other) prev = fetch(*ctx.prev_other, scale_motion(hyps[h], -1));
    if (ctx.next_other) next = fetch(*ctx.next_other, scale_motion(hyps[h], +1));
    std::optional<double> agreement;
    if (prev && next) {
      agreement = mean_abs_diff(*prev, *next);
      consider(blend(*prev, *next), TemporalSource::Average, h, agreement);
    }
    if (prev) consider(std::move(*prev), TemporalSource::PrevOther, h, agreement);
    if (next) consider(std::move(*next), TemporalSource::NextOther, h, agreement);
  }
  if (!best && ctx.prev_same) {
    for (std::size_t h = 0; h < hyps.size(); ++h) {
      if (auto b = fetch(*ctx.prev_same, scale_motion(hyps[h], -2))) consider(std::move(*b), TemporalSource::PrevSame, h, std::nullopt);
    }
  }
  if (!best) throw NoSupportError("no temporal context covers this block");
  return std::move(*best);
}

FstDecision conceal_fst(const DamagedFrame& df, const ConcealmentContext& ctx, BlockPos pos, const FstConfig& cfg) {
  std::optional<Block> spatial;
  std::optional<TemporalChoice> temporal;
  try {
    spatial = conceal_spatial(df, pos);
  } catch (const NoSupportError&) {
  }
  try {
    temporal = conceal_temporal(df, ctx, pos);
  } catch (const NoSupportError&) {
  }
  if (!spatial && !temporal) throw NoSupportError("neither spatial nor temporal support for block");

  FstDecision d;
  if (spatial) d.spatial_score = boundary_score(df, pos, *spatial);
  if (temporal) d.temporal_score = temporal->score;

  if (!temporal) {
    d.block = std::move(*spatial);
    d.method = ConcealMethod::Spatial;
    d.chosen_score = d.spatial_score;
    return d;
  }
  // without a measurable border the smoothness comparison is empty; keep the temporal estimate
  if (!spatial || !d.spatial_score || !d.temporal_score) {
    d.block = std::move(temporal->block);
    d.method = ConcealMethod::Temporal;
    d.chosen_score = d.temporal_score;
    return d;
  }

  const double ds = *d.spatial_score;
  const double dt = *d.temporal_score;
  if (std::abs(ds - dt) <= cfg.blend_threshold) {
    d.block = blend(*spatial, temporal->block);
    d.method = ConcealMethod::Blend;
    d.chosen_score = boundary_score(df, pos, d.block);
  } else if (dt < ds) {
    d.block = std::move(temporal->block);
    d.method = ConcealMethod::Temporal;
    d.chosen_score = dt;
  } else {
    d.block = std::move(*spatial);
    d.method = ConcealMethod::Spatial;
    d.chosen_score = ds;
  }
  return d;
}

namespace {

std::string format_score(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

// Co-located copy from the first available source.
std::optional<Block> freeze_block(std::initializer_list<const std::optional<ContextFrame>*> sources, BlockPos pos) {
  for (const auto* src : sources) {
    if (*src && block_inside((*src)->frame, pos)) return extract_block((*src)->frame, pos);
  }
  return std::nullopt;
}

}  // namespace

std::string ConcealmentReport::to_csv() const {
  std::ostringstream os;
  os << "frame,mb_x,mb_y,method,Ds,Dt,score\n";
  for (const auto& r : records) {
    os << r.frame << ',' << r.mb_x << ',' << r.mb_y << ',' << to_string(r.method) << ',' << format_score(r.spatial_score)
       << ',' << format_score(r.temporal_score) << ',' << format_score(r.chosen_score) << '\n';
  }
  return os.str();
}

bool conceal_frame(DamagedFrame& df, const ConcealmentContext& ctx, ConcealmentMode mode, const FstConfig& cfg,
                   int display_index, std::vector<ConcealmentRecord>& records) {
  const int n = df.mb_size;
  bool bootstrap = false;
  const bool whole_frame = df.fully_lost();

  for (int my = 0; my < df.mb_rows(); ++my) {
    for (int mx = 0; mx < df.mb_cols(); ++mx) {
      if (df.mb_ok(mx, my)) continue;
      const BlockPos pos{mx * n, my * n, n};
      ConcealmentRecord rec{display_index, mx, my, ConcealMethod::Freeze, {}, {}, {}};
      std::optional<Block> block;

      switch (mode) {
        case ConcealmentMode::None:
          break;
        case ConcealmentMode::Spatial:
          if (!whole_frame) {
            block = conceal_spatial(df, pos);
            rec.method = ConcealMethod::Spatial;
            rec.spatial_score = rec.chosen_score = boundary_score(df, pos, *block);
          }
          break;
        case ConcealmentMode::Fst:
          if (!whole_frame) {
            try {
              FstDecision d = conceal_fst(df, ctx, pos, cfg);
              rec.method = d.method;
              rec.spatial_score = d.spatial_score;
              rec.temporal_score = d.temporal_score;
              rec.chosen_score = d.chosen_score;
              block = std::move(d.block);
            } catch (const NoSupportError&) {
            }
            break;
          }
          // a wholly lost frame has no received spatial support
          [[fallthrough]];
        case ConcealmentMode::Temporal:
          try {
            TemporalChoice t = conceal_temporal(df, ctx, pos);
            rec.method = ConcealMethod::Temporal;
            rec.temporal_score = rec.chosen_score = t.score;
            block = std::move(t.block);
          } catch (const NoSupportError&) {
            if (!whole_frame) {
              block = conceal_spatial(df, pos);
              rec.method = ConcealMethod::Spatial;
              rec.spatial_score = rec.chosen_score = boundary_score(df, pos, *block);
            }
          }
          break;
      }

      if (!block) {
        // whole lost frames freeze the last displayed picture; lost blocks copy this stream's reference
        block = whole_frame ? freeze_block({&ctx.prev_other, &ctx.prev_same}, pos)
                            : freeze_block({&ctx.prev_same, &ctx.prev_other}, pos);
        rec.method = ConcealMethod::Freeze;
        if (!block) {
          block = grey_block(n);
          rec.method = ConcealMethod::Bootstrap;
          bootstrap = true;
        }
        rec.chosen_score = boundary_score(df, pos, *block);
      }
      df.fill(pos, *block);
      records.push_back(rec);
    }
  }
  return bootstrap;
}

}  // namespace fstmdc
