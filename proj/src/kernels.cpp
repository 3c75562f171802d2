#include "wavemorph/kernels.hpp"

#include "wavemorph/errors.hpp"

#include <vector>

namespace wavemorph {

namespace {

void check_shapes(const Plane& in, std::span<const double> taps, Plane& out) {
  if (taps.empty()) throw InputError("empty filter");
  if (!in.same_shape(out)) out = Plane(in.width(), in.height());
}

// wrapped[n * taps + k] = (n - step*k) mod len
std::vector<std::size_t> wrap_table(std::size_t len, std::size_t ntaps, long step) {
  std::vector<std::size_t> table(len * ntaps);
  const long n_len = static_cast<long>(len);
  for (long n = 0; n < n_len; ++n) {
    for (std::size_t k = 0; k < ntaps; ++k) {
      long idx = (n - step * static_cast<long>(k)) % n_len;
      if (idx < 0) idx += n_len;
      table[static_cast<std::size_t>(n) * ntaps + k] = static_cast<std::size_t>(idx);
    }
  }
  return table;
}

inline void filter_row(const Plane& in, std::span<const double> taps,
                       const std::vector<std::size_t>& wrap, std::size_t r, Plane& out) {
  const std::size_t nt = taps.size();
  auto src = in.row(r);
  auto dst = out.row(r);
  for (std::size_t c = 0; c < dst.size(); ++c) {
    const std::size_t* w = &wrap[c * nt];
    double acc = 0.0;
    for (std::size_t k = 0; k < nt; ++k) acc += taps[k] * src[w[k]];
    dst[c] = acc;
  }
}

inline void filter_column_row(const Plane& in, std::span<const double> taps,
                              const std::vector<std::size_t>& wrap, std::size_t r, Plane& out) {
  const std::size_t nt = taps.size();
  const std::size_t* w = &wrap[r * nt];
  auto dst = out.row(r);
  for (std::size_t c = 0; c < dst.size(); ++c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nt; ++k) acc += taps[k] * in.at(w[k], c);
    dst[c] = acc;
  }
}

} // namespace

namespace serial {

void filter_axis(const Plane& in, std::span<const double> taps, long step, Axis axis, Plane& out) {
  check_shapes(in, taps, out);
  const std::size_t rows = in.height();
  if (axis == Axis::rows) {
    const auto wrap = wrap_table(in.width(), taps.size(), step);
    for (std::size_t r = 0; r < rows; ++r) filter_row(in, taps, wrap, r, out);
  } else {
    const auto wrap = wrap_table(in.height(), taps.size(), step);
    for (std::size_t r = 0; r < rows; ++r) filter_column_row(in, taps, wrap, r, out);
  }
}

} // namespace serial

namespace parallel {

void filter_axis(const Plane& in, std::span<const double> taps, long step, Axis axis, Plane& out) {
  check_shapes(in, taps, out);
  const long rows = static_cast<long>(in.height());
  if (axis == Axis::rows) {
    const auto wrap = wrap_table(in.width(), taps.size(), step);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) filter_row(in, taps, wrap, static_cast<std::size_t>(r), out);
  } else {
    const auto wrap = wrap_table(in.height(), taps.size(), step);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r)
      filter_column_row(in, taps, wrap, static_cast<std::size_t>(r), out);
  }
}

} // namespace parallel

void filter_axis(Backend backend, const Plane& in, std::span<const double> taps, long step,
                 Axis axis, Plane& out) {
  if (backend == Backend::serial)
    serial::filter_axis(in, taps, step, axis, out);
  else
    parallel::filter_axis(in, taps, step, axis, out);
}

void accumulate(Plane& dst, const Plane& src) {
  if (!dst.same_shape(src)) throw InputError("accumulate: plane shapes differ");
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

} // namespace wavemorph
