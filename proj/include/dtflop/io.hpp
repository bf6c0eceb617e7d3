#ifndef DTFLOP_IO_HPP
#define DTFLOP_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include <dtflop/oracles.hpp>
#include <dtflop/series.hpp>
#include <dtflop/wallcross.hpp>

namespace dtflop
{

using Json = nlohmann::ordered_json;

// Every known term as [{n, beta, num, den}] sorted by key. Integers that overflow
// int64 are written as decimal strings.
Json series_to_json(const ConeSeries &s);
ConeSeries series_from_json(const Json &j, const SupportSet &support, const Truncation &trunc);
std::string write_series_json(const ConeSeries &s);
ConeSeries read_series_json(const std::string &text, const SupportSet &support, const Truncation &trunc);

// Header n,beta,num,den; beta coordinates joined by ';'.
std::string write_series_csv(const ConeSeries &s);
ConeSeries read_series_csv(const std::string &text, const SupportSet &support, const Truncation &trunc);

Json monomial_to_json(const Monomial &k);
// [{t_num, t_den, classes: [{n, beta}], epsilon}]
Json walls_to_json(const std::vector<WallEvent> &events);
std::string write_walls_csv(const std::vector<WallEvent> &events);

// {scenario, box, status, checks, first_mismatch?, series}
Json report_to_json(const ScenarioReport &report);

// n,count and w,b,count tables.
std::string plane_counts_csv(const std::vector<std::int64_t> &counts);
std::string pyramid_counts_csv(const PyramidTable &table);
Json plane_counts_json(const std::vector<std::int64_t> &counts);
Json pyramid_counts_json(const PyramidTable &table);

} // namespace dtflop

#endif
