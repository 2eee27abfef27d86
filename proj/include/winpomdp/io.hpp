#pragma once

#include <string>

#include "winpomdp/pomdp.hpp"

namespace winpomdp {

/// Doubles in CSV and JSON reports are printed with 12 significant digits,
/// '.' decimal separator.
std::string format_double(double v);

/// Loads the POMDP interchange document: a JSON object with fields n_states,
/// n_actions, n_obs, trans ([s][a][s']), obs ([s][a][o]), reward ([o][a]),
/// init_dist, discount. Rows whose sums deviate from 1 by at most 1e-9 are
/// renormalized (divided by their sum); larger deviations are validation
/// errors. The loaded model is validated before it is returned.
TabularPomdp load_pomdp_json(const std::string& path);

/// Writes the interchange document for `pomdp` to `path`.
void save_pomdp_json(const TabularPomdp& pomdp, const std::string& path);

/// Resolves a --pomdp argument: the built-in name "probe" or a path to an
/// interchange file.
TabularPomdp resolve_pomdp(const std::string& source);

} // namespace winpomdp
