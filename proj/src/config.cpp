#include "wavemorph/config.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/filters.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"

#include <charconv>
#include <sstream>

namespace wavemorph {

void RunConfig::validate() const {
  wavelet_by_name(wavelet);
  if (resize != 0 && (resize < 8 || resize > 8192))
    throw InputError("resize must be 0 or in [8, 8192], got " + std::to_string(resize));
  if (entropy_levels < 2 || entropy_levels > 65536)
    throw InputError("entropy_levels must be in [2, 65536], got " + std::to_string(entropy_levels));
  if (dist_bins < 1 || dist_bins > 4096)
    throw InputError("dist_bins must be in [1, 4096], got " + std::to_string(dist_bins));
  if (!(kl_epsilon > 0.0 && kl_epsilon <= 1e-3))
    throw InputError("kl_epsilon must be in (0, 1e-3], got " + format_double(kl_epsilon));
  if (workers < 0 || workers > 1024)
    throw InputError("workers must be in [0, 1024], got " + std::to_string(workers));
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(source + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty() || !out.emplace(key, trim(t.substr(eq + 1))).second)
      throw InputError(source + ":" + std::to_string(lineno) + ": empty or repeated key '" + key + "'");
  }
  return out;
}

namespace {

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError(std::string("cannot parse ") + what + " from '" + s + "'");
  return v;
}

} // namespace

void apply_key_values(RunConfig& c, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "wavelet")
      c.wavelet = value;
    else if (key == "resize")
      c.resize = static_cast<std::size_t>(parse_u64(value, "resize"));
    else if (key == "entropy_levels")
      c.entropy_levels = parse_int(value, "entropy_levels");
    else if (key == "dist_bins")
      c.dist_bins = parse_int(value, "dist_bins");
    else if (key == "kl_epsilon")
      c.kl_epsilon = parse_double(value, "kl_epsilon");
    else if (key == "seed")
      c.seed = parse_u64(value, "seed");
    else if (key == "workers")
      c.workers = parse_int(value, "workers");
    else
      throw InputError("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig c;
  apply_key_values(c, parse_key_values(read_text_file(path), path.string()));
  return c;
}

std::string config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "wavelet = " << c.wavelet << '\n'
     << "resize = " << c.resize << '\n'
     << "entropy_levels = " << c.entropy_levels << '\n'
     << "dist_bins = " << c.dist_bins << '\n'
     << "kl_epsilon = " << format_double(c.kl_epsilon) << '\n'
     << "seed = " << c.seed << '\n'
     << "workers = " << c.workers << '\n';
  return os.str();
}

} // namespace wavemorph
