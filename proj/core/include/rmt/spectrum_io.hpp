#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "rmt/spectrum.hpp"

namespace rmt {

/// Parses {"atoms": [[w, tau], ...], "segments": [[w, lo, hi], ...]}.
/// Either key may be omitted. Throws InvalidSpectrum on malformed input.
PopulationSpectrum spectrum_from_json(const nlohmann::json& doc);

nlohmann::json spectrum_to_json(const PopulationSpectrum& spec);

PopulationSpectrum load_spectrum(const std::filesystem::path& path);

}  // namespace rmt
