#pragma once

#include <string>
#include <vector>

namespace wavemorph {

/// Analysis/synthesis filters for the undecimated filter bank.
///
/// Analysis taps are applied causally (tap k reaches k*dilation samples
/// back); synthesis taps are applied anti-causally (tap k reaches forward).
/// The synthesis taps carry the 1/2 factor of the redundant transform, so
/// one undecimated level reconstructs as
///   x = synth_low (*) (low (*) x) + synth_high (*) (high (*) x)
/// per axis.
struct FilterPair {
  std::string name;
  std::vector<double> low;
  std::vector<double> high;
  std::vector<double> synth_low;
  std::vector<double> synth_high;

  std::size_t length() const noexcept;
  /// Span of the longest filter after inserting dilation-1 zeros between taps.
  std::size_t dilated_support(std::size_t dilation) const noexcept;
};

/// Builds an orthogonal pair from its low-pass taps (quadrature mirror high-pass).
FilterPair make_orthogonal(std::string name, std::vector<double> low);

FilterPair haar();
FilterPair daubechies2();
FilterPair daubechies4();

/// Shipped filters: "haar", "db2", "db4".
std::vector<std::string> wavelet_names();
/// Throws InputError for an unknown name.
FilterPair wavelet_by_name(const std::string& name);

} // namespace wavemorph
