#pragma once

#include "wavemorph/filters.hpp"
#include "wavemorph/kernels.hpp"
#include "wavemorph/plane.hpp"

#include <array>
#include <string>
#include <vector>

namespace wavemorph {

/// Sub-band orientation. First letter is the filter applied along rows
/// (horizontal), second the filter applied along columns.
enum class Orientation { LL = 0, LH = 1, HL = 2, HH = 3 };

std::string_view to_string(Orientation o);

struct OneLevel {
  Plane ll, lh, hl, hh;

  const Plane& operator[](Orientation o) const;
};

/// One undecimated level with filters dilated by `dilation` (1, 2, 4, ...).
/// Throws InputError when the dilated support exceeds either image side.
OneLevel decompose_one_level(const Plane& img, const FilterPair& f, std::size_t dilation = 1,
                             Backend backend = Backend::parallel);

/// Inverse of decompose_one_level for the same filters and dilation.
Plane reconstruct_one_level(const Plane& ll, const Plane& lh, const Plane& hl, const Plane& hh,
                            const FilterPair& f, std::size_t dilation = 1,
                            Backend backend = Backend::parallel);

inline constexpr int kNumSubbands = 48;

/// Path of a level-3 leaf. level1 is never LL (that branch is discarded).
struct BandPath {
  Orientation level1;
  Orientation level2;
  Orientation level3;

  friend bool operator==(const BandPath&, const BandPath&) = default;
};

/// index = 16*B1 + 4*B2 + B3 + 1 with B1 in {LH=0, HL=1, HH=2} and
/// B2, B3 in {LL=0, LH=1, HL=2, HH=3}. Index range is [1, 48].
int encode_band(const BandPath& path);
BandPath decode_band(int index);
/// e.g. "HH-LL-LH"
std::string band_name(int index);

class SubBandStack {
public:
  SubBandStack() = default;
  SubBandStack(std::size_t width, std::size_t height, std::vector<Plane> bands);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t band_count() const noexcept { return bands_.size(); }

  /// 1-based sub-band index.
  const Plane& band(int index) const;
  const std::vector<Plane>& bands() const noexcept { return bands_; }

  friend bool operator==(const SubBandStack&, const SubBandStack&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Plane> bands_;
};

/// Three-level uniform tree without the level-1 LL branch.
/// Throws InputError if the image is smaller than 8x8 or than the level-3
/// dilated filter support.
SubBandStack decompose_48(const Plane& img, const FilterPair& f,
                          Backend backend = Backend::parallel);

} // namespace wavemorph
