#include "wavemorph/wavelet.hpp"

#include "wavemorph/errors.hpp"

#include <cmath>
#include <string>

namespace wavemorph {

std::string_view to_string(Orientation o) {
  switch (o) {
  case Orientation::LL: return "LL";
  case Orientation::LH: return "LH";
  case Orientation::HL: return "HL";
  case Orientation::HH: return "HH";
  }
  return "??";
}

const Plane& OneLevel::operator[](Orientation o) const {
  switch (o) {
  case Orientation::LL: return ll;
  case Orientation::LH: return lh;
  case Orientation::HL: return hl;
  case Orientation::HH: return hh;
  }
  throw InvariantError("bad orientation");
}

namespace {

void check_support(const Plane& img, const FilterPair& f, std::size_t dilation) {
  if (dilation == 0) throw InputError("dilation must be >= 1");
  if (f.low.empty() || f.high.empty()) throw InputError("filter pair '" + f.name + "' is empty");
  const std::size_t support = f.dilated_support(dilation);
  if (img.width() < support || img.height() < support)
    throw InputError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                     " is smaller than the dilated filter support " + std::to_string(support) +
                     " (dilation " + std::to_string(dilation) + ")");
}

} // namespace

OneLevel decompose_one_level(const Plane& img, const FilterPair& f, std::size_t dilation,
                             Backend backend) {
  check_support(img, f, dilation);
  const long step = static_cast<long>(dilation);
  Plane row_low, row_high;
  filter_axis(backend, img, f.low, step, Axis::rows, row_low);
  filter_axis(backend, img, f.high, step, Axis::rows, row_high);

  OneLevel out;
  filter_axis(backend, row_low, f.low, step, Axis::columns, out.ll);
  filter_axis(backend, row_low, f.high, step, Axis::columns, out.lh);
  filter_axis(backend, row_high, f.low, step, Axis::columns, out.hl);
  filter_axis(backend, row_high, f.high, step, Axis::columns, out.hh);
  return out;
}

Plane reconstruct_one_level(const Plane& ll, const Plane& lh, const Plane& hl, const Plane& hh,
                            const FilterPair& f, std::size_t dilation, Backend backend) {
  if (!ll.same_shape(lh) || !ll.same_shape(hl) || !ll.same_shape(hh))
    throw InputError("reconstruct_one_level: sub-band planes have mismatched dimensions");
  check_support(ll, f, dilation);
  const long step = -static_cast<long>(dilation);

  // Columns first: undo the column filter of each row-filter branch.
  Plane low_branch, high_branch, tmp;
  filter_axis(backend, ll, f.synth_low, step, Axis::columns, low_branch);
  filter_axis(backend, lh, f.synth_high, step, Axis::columns, tmp);
  accumulate(low_branch, tmp);
  filter_axis(backend, hl, f.synth_low, step, Axis::columns, high_branch);
  filter_axis(backend, hh, f.synth_high, step, Axis::columns, tmp);
  accumulate(high_branch, tmp);

  Plane out;
  filter_axis(backend, low_branch, f.synth_low, step, Axis::rows, out);
  filter_axis(backend, high_branch, f.synth_high, step, Axis::rows, tmp);
  accumulate(out, tmp);
  return out;
}

int encode_band(const BandPath& path) {
  if (path.level1 == Orientation::LL) throw InputError("level-1 LL branch is not decomposed");
  const int b1 = static_cast<int>(path.level1) - 1;
  return 16 * b1 + 4 * static_cast<int>(path.level2) + static_cast<int>(path.level3) + 1;
}

BandPath decode_band(int index) {
  if (index < 1 || index > kNumSubbands)
    throw InputError("sub-band index " + std::to_string(index) + " outside [1,48]");
  const int z = index - 1;
  return {static_cast<Orientation>(z / 16 + 1), static_cast<Orientation>((z / 4) % 4),
          static_cast<Orientation>(z % 4)};
}

std::string band_name(int index) {
  const BandPath p = decode_band(index);
  std::string s;
  s += to_string(p.level1);
  s += '-';
  s += to_string(p.level2);
  s += '-';
  s += to_string(p.level3);
  return s;
}

SubBandStack::SubBandStack(std::size_t width, std::size_t height, std::vector<Plane> bands)
    : width_(width), height_(height), bands_(std::move(bands)) {
  if (bands_.size() != static_cast<std::size_t>(kNumSubbands))
    throw InputError("sub-band stack must hold 48 bands, got " + std::to_string(bands_.size()));
  for (const auto& b : bands_) {
    if (b.width() != width_ || b.height() != height_)
      throw InputError("sub-band dimensions differ from stack dimensions");
  }
}

const Plane& SubBandStack::band(int index) const {
  if (index < 1 || index > static_cast<int>(bands_.size()))
    throw InputError("sub-band index " + std::to_string(index) + " outside [1,48]");
  return bands_[static_cast<std::size_t>(index - 1)];
}

SubBandStack decompose_48(const Plane& img, const FilterPair& f, Backend backend) {
  if (img.width() < kMinImageSide || img.height() < kMinImageSide)
    throw InputError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                     " is smaller than the 8x8 minimum for the dilation-4 filter support");
  for (double v : img.values())
    if (!std::isfinite(v)) throw InputError("image contains non-finite values");
  check_support(img, f, 4);

  std::vector<Plane> bands(kNumSubbands);
  OneLevel level1 = decompose_one_level(img, f, 1, backend);
  for (Orientation o1 : {Orientation::LH, Orientation::HL, Orientation::HH}) {
    OneLevel level2 = decompose_one_level(level1[o1], f, 2, backend);
    for (int b2 = 0; b2 < 4; ++b2) {
      const auto o2 = static_cast<Orientation>(b2);
      OneLevel level3 = decompose_one_level(level2[o2], f, 4, backend);
      for (int b3 = 0; b3 < 4; ++b3) {
        const auto o3 = static_cast<Orientation>(b3);
        const int idx = encode_band({o1, o2, o3});
        bands[static_cast<std::size_t>(idx - 1)] = std::move(
            o3 == Orientation::LL   ? level3.ll
            : o3 == Orientation::LH ? level3.lh
            : o3 == Orientation::HL ? level3.hl
                                    : level3.hh);
      }
    }
  }
  return SubBandStack(img.width(), img.height(), std::move(bands));
}

} // namespace wavemorph
