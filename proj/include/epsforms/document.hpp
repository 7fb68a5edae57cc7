#pragma once

// JSON q-expansion documents and the on-disk basis cache.

#include "epsforms/spaces.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epsforms {

inline constexpr int kSchemaVersion = 1;
/// Bumped whenever the generator strategy changes; part of every cache key.
inline constexpr int kStrategyVersion = 1;

struct QExpansionDocument {
  int schema_version = kSchemaVersion;
  std::int64_t level = 0;
  int weight = 0;
  SignVector epsilon;
  std::int64_t lattice_denom = 1;
  std::int64_t truncation = 0; // lattice index; coefficients are known below it
  std::optional<std::int64_t> order;
  std::vector<std::pair<std::int64_t, Rational>> coefficients; // ascending, nonzero

  static QExpansionDocument from_series(const SpaceSpec& spec, const QSeries& f,
                                        std::optional<std::int64_t> order = std::nullopt);
  QSeries series() const;

  nlohmann::json to_json() const;
  /// Throws InputError on any schema violation.
  static QExpansionDocument from_json(const nlohmann::json& j);

  /// Compact, key-sorted text; identical documents give identical bytes.
  std::string serialize() const;
  static QExpansionDocument parse(const std::string& text);
};

QExpansionDocument read_document(const std::filesystem::path& path);

/// Reduced bases stored as one JSON file per (strategy, space, truncation, m_min).
class BasisCache {
public:
  explicit BasisCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  /// EPSFORMS_CACHE, or ./.epsforms-cache when unset.
  static BasisCache from_env();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const SpaceSpec& spec, std::int64_t m_min) const;

  std::optional<std::map<std::int64_t, QSeries>> load(const SpaceSpec& spec, std::int64_t m_min) const;
  /// Writes to a temporary file and renames it into place.
  void store(const SpaceSpec& spec, std::int64_t m_min, const std::map<std::int64_t, QSeries>& forms) const;

  static std::string serialize(const SpaceSpec& spec, std::int64_t m_min, const std::map<std::int64_t, QSeries>& forms);

private:
  std::filesystem::path dir_;
};

/// Cached lookup in front of Engine::canonical_basis.
std::map<std::int64_t, QSeries> cached_basis(Engine& engine, const BasisCache* cache, const SpaceSpec& spec,
                                             std::int64_t m_min);

} // namespace epsforms
