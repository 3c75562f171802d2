#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace wavemorph {

/// Settings shared by every command. Config files are flat `key = value`
/// text; `#` starts a comment. Keys: wavelet, resize, entropy_levels,
/// dist_bins, kl_epsilon, seed, workers.
struct RunConfig {
  std::string wavelet = "haar";
  std::size_t resize = 256; // 0 keeps native size
  int entropy_levels = 256;
  int dist_bins = 32;
  double kl_epsilon = 1e-10;
  std::uint64_t seed = 0;
  int workers = 0; // 0: OpenMP default

  /// Throws InputError listing the first out-of-range field.
  void validate() const;
};

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source = "config");
/// Applies recognised keys onto `config`; unknown keys are an InputError.
void apply_key_values(RunConfig& config, const std::map<std::string, std::string>& values);
RunConfig load_config(const std::filesystem::path& path);

std::string config_text(const RunConfig& config);

} // namespace wavemorph
