#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifsp/distribution.hpp"
#include "ifsp/ifs.hpp"
#include "ifsp/stats.hpp"

namespace ifsp {

// ordered_json keeps insertion order, so dumps are stable byte-for-byte and
// keys appear in the documented order.
using Json = nlohmann::ordered_json;

// Shortest decimal text that parses back to exactly v (std::to_chars).
std::string format_double(double v);

// Decimal or 0x-prefixed hex. Anything else, including overflow: DomainError.
std::uint64_t parse_u64(const std::string& text);

// Distribution specifier strings, the CLI's naming scheme:
//   uniform | exp:<lambda> | triangular | cantor
//   tabulated:<path.csv>   two columns x,F per row
//   empirical:<path.csv>   one column of samples
// File-backed specs read their CSV here.
Distribution parse_dist_spec(const std::string& spec);

// Inverse of parse_dist_spec. File-backed kinds need their source path
// recorded (the factories keep it); a pathless grid cannot be serialized.
std::string dist_spec_string(const Distribution& dist);

// {label, n, probs[], maps[]}; every map parameter round-trips bit-exactly.
// Theorem maps store their distribution as a specifier string, so loading
// may re-read CSV files for file-backed distributions.
Json ifsp_to_json(const Ifsp& ifsp);
Ifsp ifsp_from_json(const Json& j);
void save_ifsp(const Ifsp& ifsp, const std::string& path);
Ifsp load_ifsp(const std::string& path);

// {statistic, n, alpha, critical, pass}
Json ks_report_to_json(const KsReport& report);

// CSV inputs. Blank lines and lines starting with '#' are skipped; every
// other line must parse (ConstructionError otherwise).
std::vector<double> read_csv_column(const std::string& path);
void read_csv_two_columns(const std::string& path, std::vector<double>* xs,
                          std::vector<double>* us);

}  // namespace ifsp
