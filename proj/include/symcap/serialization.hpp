// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON forms of the domain types, the precomputation cache file, sweep CSV
// rows, and atomic file output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "symcap/basis.hpp"
#include "symcap/channel.hpp"
#include "symcap/coherent_info.hpp"
#include "symcap/optimizer.hpp"

namespace symcap {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Malformed or inconsistent input file. `path` is a JSON pointer-like
/// location ("/alpha0/3") or a file path.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
/// Hash of the compact dump of `config`.
std::string config_hash(const Json& config);

/// {tool, version, seed, config_hash}
Json provenance(std::uint64_t seed, const std::string& hash);

Json to_json(const PauliChannel& ch);
PauliChannel channel_from_json(const Json& j, const std::string& path = "");

/// The basis is stored as its states; beta and the overlap are rebuilt.
Json to_json(const SpanningBasis& basis);
SpanningBasis basis_from_json(const Json& j, const std::string& path = "");

/// {n, alpha0: [[re, im], ...], alpha1: [...]}
Json to_json(const SymmetricInput& input);
SymmetricInput input_from_json(const Json& j, const std::string& path = "");

Json to_json(const ThresholdRecord& rec);
ThresholdRecord record_from_json(const Json& j, const std::string& path = "");

Json parse_json_file(const std::filesystem::path& file);

/// Writes to a sibling temporary file and renames it over `file`.
void write_file_atomic(const std::filesystem::path& file, std::string_view contents);

/// Cache layout: 8-byte magic, little-endian u64 metadata length, metadata
/// JSON, then the ND blocks as raw doubles (re, im) in block order.
void save_precomputation(const std::filesystem::path& file, const Precomputation& pre, const Json& meta);

struct LoadedCache {
  Json meta;
  Precomputation pre;
};
LoadedCache load_precomputation(const std::filesystem::path& file);
/// Metadata only; std::nullopt when the file is missing or not a cache.
std::optional<Json> peek_cache_meta(const std::filesystem::path& file);

struct SweepRow {
  FamilyKind family = FamilyKind::depolarizing;
  int n = 0;
  double p_star = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
  double wall_time_s = 0.0;
};

inline constexpr std::string_view kSweepHeader = "family,n,p_star,ci_lo,ci_hi,seed,restarts,wall_time_s";

/// Reals use the shortest round-trip form.
std::string format_sweep_row(const SweepRow& row);
SweepRow parse_sweep_row(std::string_view line);

/// A sweep file: one provenance comment line, the header, then rows.
struct SweepFile {
  Json provenance;
  std::vector<SweepRow> rows;
};
std::string format_sweep_file(const SweepFile& file);
SweepFile parse_sweep_file(const std::string& text, const std::string& path = "");

/// Shortest decimal that reads back to the same double.
std::string format_real(double v);

}  // namespace symcap
