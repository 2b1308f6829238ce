#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "torick/futaki.hpp"
#include "torick/polytope.hpp"
#include "torick/solver.hpp"

namespace torick
{

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

struct RunConfig {
    double quad_tol{kDefaultQuadTol};
    double tau_a{kDefaultTauA};
    double tau_eq{1e-8};
    std::size_t creases{200};
    std::uint64_t seed{42};
    std::string output;  // empty: stdout

    /// Throws InvalidInput on a non-positive tolerance.
    void validate() const;
};

Json to_json(const RunConfig& c);
/// Reads the keys present in j over the defaults; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});

/**
 * Polytope from JSON, either
 *     {"vertices": [[x, y], ...], "labels": [{"c0": .., "c1": .., "c2": ..}, ...]}
 * or  {"halfplanes": [...]}. An affine map may also be written [c0, c1, c2].
 * to_json writes the first form with object labels.
 */
LabelledPolytope2 polytope_from_json(const Json& j);
LabelledPolytope2 read_polytope(const std::string& path);
Json to_json(const LabelledPolytope2& p);

Json to_json(const AffineMap2& a);
/// "c0,c1,c2".
AffineMap2 parse_affine(const std::string& s);

Json to_json(const ConditionASolution& s);
Json to_json(const CreaseScanReport& r, bool include_values = false);

/// Sorted keys, numbers as %.17g, two-space indent; non-finite numbers become null.
std::string dump(const Json& j);

/// Aligned "path: value" lines for the --human flag.
std::string render_human(const Json& j);

}  // namespace torick
