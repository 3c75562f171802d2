#pragma once

#include "wavemorph/plane.hpp"

#include <span>

namespace wavemorph {

enum class Axis { rows, columns };

/// Selects the kernel implementation. Both produce bit-identical results;
/// serial is the reference kept for testing and benchmarking.
enum class Backend { serial, parallel };

/// Periodic filtering along one axis:
///   out[n] = sum_k taps[k] * in[(n - step*k) mod N]
/// A positive step is dilated convolution, a negative step is dilated
/// correlation. Axis::rows filters along each row (horizontal).
namespace serial {
void filter_axis(const Plane& in, std::span<const double> taps, long step, Axis axis, Plane& out);
} // namespace serial

namespace parallel {
void filter_axis(const Plane& in, std::span<const double> taps, long step, Axis axis, Plane& out);
} // namespace parallel

void filter_axis(Backend backend, const Plane& in, std::span<const double> taps, long step,
                 Axis axis, Plane& out);

/// Adds src into dst element-wise.
void accumulate(Plane& dst, const Plane& src);

} // namespace wavemorph
