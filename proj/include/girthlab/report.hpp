#pragma once

// JSON and CSV renderings of every result type.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "girthlab/cayley.hpp"
#include "girthlab/exactmat.hpp"
#include "girthlab/modmat.hpp"
#include "girthlab/params.hpp"
#include "girthlab/spectral.hpp"
#include "girthlab/words.hpp"

namespace girthlab {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Entries as numbers when they fit 64 bits, decimal strings otherwise.
Json to_json(const ExactMatrix& m);
Json to_json(const ModMatrix& m);
Json to_json(const GraphSpec& spec);
Json to_json(const FreenessReport& report);
/// Timing is included only when `timing` is set, keeping default output
/// byte-identical across runs.
Json to_json(const CayleyStats& row, bool timing);
Json to_json(const GirthBound& bound);
Json to_json(const SpectralGapReport& report);
Json to_json(const RecipeReport& report);
Json to_json(const SubgroupGenerators& gens);

/// p,order,full,girth,diameter,ratio,seconds,peak_bytes[,second_eigenvalue]
std::string csv_header(bool with_spectral);
/// Failed rows keep p and leave the other fields empty; seconds is empty
/// unless `timing` is set.
std::string csv_row(const CayleyStats& row, bool timing, std::optional<double> second = std::nullopt,
                    bool with_spectral = false);

/// Shortest round-trip decimal form used in both CSV and text output.
std::string format_double(double v);

}  // namespace girthlab
