#pragma once

#include "gwalk/coin.hpp"
#include "gwalk/localize.hpp"
#include "gwalk/space.hpp"
#include "gwalk/walk.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gwalk {

using Json = nlohmann::json;

// 17 significant digits, '.' decimal, independent of the global locale.
std::string format_double(double v);

// {"family", "theta" | null, "r": [num, den] | null, "entries_re", "entries_im"}
Json coin_to_json(const Coin &c);
Coin coin_from_json(const Json &j);
// Exact entries as [num, den] pairs; integers that overflow 64 bits become strings.
Json rational_coin_to_json(const RationalCoin &c);

Json decomposition_to_json(const LinearSumDecomposition &d, std::optional<int> row_sum_sign);

// Sixteen whitespace-separated reals (row-major), a JSON 4x4 array, or a coin
// object. Throws ValidationError on anything else.
Mat4c parse_matrix(const std::string &text);

// One row per (report, S): family, S, theta, p_total, p_RR .. p_DD (the full
// [S][S'] grid in chirality order), quad_M. Rows for a single S when given.
void write_sweep_csv(std::ostream &os, const std::vector<LocalizationReport> &rows,
                     std::optional<Chirality> only = std::nullopt);
Json report_to_json(const LocalizationReport &r);
Json sweep_to_json(const std::vector<LocalizationReport> &rows);

// Rows t, x, y, P_t for t = 0 .. T-1 at each requested site.
void write_trajectory_csv(std::ostream &os, const Mat4 &C, int N, Chirality S, long T,
                          const std::vector<std::pair<int, int>> &sites);
// {"N", "t", "amplitudes": [[re, im], ...]} in one-based index order.
Json state_to_json(const WalkState &s, long t);

}  // namespace gwalk
