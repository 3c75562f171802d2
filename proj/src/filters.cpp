#include "wavemorph/filters.hpp"

#include "wavemorph/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wavemorph {

std::size_t FilterPair::length() const noexcept {
  return std::max({low.size(), high.size(), synth_low.size(), synth_high.size()});
}

std::size_t FilterPair::dilated_support(std::size_t dilation) const noexcept {
  const std::size_t n = length();
  return n == 0 ? 0 : (n - 1) * dilation + 1;
}

FilterPair make_orthogonal(std::string name, std::vector<double> low) {
  const std::size_t n = low.size();
  std::vector<double> high(n);
  // g[k] = (-1)^k h[n-1-k]
  for (std::size_t k = 0; k < n; ++k) high[k] = (k % 2 == 0 ? 1.0 : -1.0) * low[n - 1 - k];

  FilterPair f;
  f.name = std::move(name);
  f.synth_low.resize(n);
  f.synth_high.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    f.synth_low[k] = 0.5 * low[k];
    f.synth_high[k] = 0.5 * high[k];
  }
  f.low = std::move(low);
  f.high = std::move(high);
  return f;
}

FilterPair haar() {
  const double s = 1.0 / std::sqrt(2.0);
  return make_orthogonal("haar", {s, s});
}

FilterPair daubechies2() {
  const double r3 = std::sqrt(3.0);
  const double d = 4.0 * std::sqrt(2.0);
  return make_orthogonal("db2", {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d});
}

FilterPair daubechies4() {
  return make_orthogonal("db4", {
                                    0.23037781330885523,
                                    0.7148465705525415,
                                    0.6308807679295904,
                                    -0.02798376941698385,
                                    -0.18703481171888114,
                                    0.030841381835986965,
                                    0.032883011666982945,
                                    -0.010597401784997278,
                                });
}

std::vector<std::string> wavelet_names() { return {"haar", "db2", "db4"}; }

FilterPair wavelet_by_name(const std::string& name) {
  if (name == "haar") return haar();
  if (name == "db2") return daubechies2();
  if (name == "db4") return daubechies4();
  throw InputError("unknown wavelet '" + name + "' (expected haar, db2 or db4)");
}

} // namespace wavemorph
