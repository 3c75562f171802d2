#pragma once

#include <string_view>

namespace wavemorph {

enum class ClassLabel { bonafide, morphed };

std::string_view to_string(ClassLabel label);
/// Parses "bonafide" / "morphed"; throws InputError otherwise.
ClassLabel parse_label(std::string_view text);

enum class Split { train, validation, test };

std::string_view to_string(Split split);
/// Parses "train" / "validation" / "test"; throws InputError otherwise.
Split parse_split(std::string_view text);

} // namespace wavemorph
