#include "rmt/spectrum_io.hpp"

#include <fstream>

#include "rmt/errors.hpp"

namespace rmt {

PopulationSpectrum spectrum_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidSpectrum("spectrum JSON must be an object");
  std::vector<Atom> atoms;
  std::vector<Segment> segments;
  try {
    if (doc.contains("atoms")) {
      for (const auto& a : doc.at("atoms")) {
        if (!a.is_array() || a.size() != 2) {
          throw InvalidSpectrum("atoms entries must be [weight, tau]");
        }
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
    }
    if (doc.contains("segments")) {
      for (const auto& s : doc.at("segments")) {
        if (!s.is_array() || s.size() != 3) {
          throw InvalidSpectrum("segments entries must be [weight, lo, hi]");
        }
        segments.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpectrum(std::string("spectrum JSON: ") + e.what());
  }
  if (atoms.empty() && segments.empty()) {
    throw InvalidSpectrum("spectrum JSON has neither atoms nor segments");
  }
  return PopulationSpectrum::validate(std::move(atoms), std::move(segments));
}

nlohmann::json spectrum_to_json(const PopulationSpectrum& spec) {
  nlohmann::json doc;
  doc["atoms"] = nlohmann::json::array();
  doc["segments"] = nlohmann::json::array();
  for (const Atom& a : spec.atoms()) doc["atoms"].push_back({a.weight, a.location});
  for (const Segment& s : spec.segments()) {
    doc["segments"].push_back({s.weight, s.lo, s.hi});
  }
  return doc;
}

PopulationSpectrum load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpectrum("cannot open spectrum file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpectrum("cannot parse " + path.string() + ": " + e.what());
  }
  return spectrum_from_json(doc);
}

}  // namespace rmt
