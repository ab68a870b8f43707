#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "repwalk/model.hpp"
#include "repwalk/observable.hpp"

namespace repwalk {

using Json = nlohmann::json;

// Schemas (all keys lower-case):
//   potential  {"type": "coefficient_table", "q": 2, "coefficients": [{"i":1,"t":2,"c":1.0}],
//               "allow_signed": false}
//            | {"type": "power_law", "gamma": 2, "xi": 1.5}
//            | {"type": "nearest_quadratic", "c": 1.0}
//   spec       {"d": 1, "T": 8, "a": 1.0, "alpha": 0.5, "potential": {...},
//               "interaction_set": [[0, 2], ...], "window_terms": [{"i":0,"j":8,"weight":0.1,"power":2}]}
//   observable {"kind": "endpoint_square"} | {"kind": "endpoint_coordinate", "coord": 0}
//            | {"kind": "monomial", "factors": [[step, coord, exponent], ...]}
//            | {"kind": "pair_equal", "i": 1, "j": 2} | {"kind": "window_all_equal", "first": 1, "last": 3}
//            | {"kind": "block_product", "a": [1, 4], "b": [5, 8], "a_scale": 0.5, "b_scale": 0.5}
//            | {"kind": "half_block_product"}
// Malformed input raises ValidationError.

Json to_json(const PairPotential& potential);
PairPotential potential_from_json(const Json& j);

Json to_json(const GibbsSpec& spec);
GibbsSpec spec_from_json(const Json& j);

Json to_json(const Observable& obs);
/// horizon resolves the "half_block_product" shorthand.
Observable observable_from_json(const Json& j, int horizon);

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of FNV-1a over the canonical (sorted-key) JSON of the spec.
std::string spec_hash(const GibbsSpec& spec);

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_double(double v);

}  // namespace repwalk
