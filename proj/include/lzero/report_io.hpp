#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lzero/approximation.hpp"
#include "lzero/embedding.hpp"
#include "lzero/experiments.hpp"
#include "lzero/sections.hpp"

namespace lzero {

/// x rounded to 12 significant digits (as printed by %.12g).
double round12(double x);

/// "%.12g"
std::string format12(double x);

nlohmann::json to_json(const Vec& v);

/// {verdict, witness:{xi, value}, min_margin, tolerance, constant_C, mass,
///  inconclusive_count, per_direction:[{xi, log_ft, density}]}
nlohmann::json embedding_report_json(const EmbeddingReport& r, bool per_direction = true);
nlohmann::json neg_p_report_json(const NegPReport& r, bool per_direction = true);
nlohmann::json counterexample_json(const CounterexampleRecord& r);
nlohmann::json cauchy_json(const CauchyMcResult& r);
nlohmann::json fit_json(const FitResult& r);
nlohmann::json psum_fit_json(const PSumFit& r);

/// Columns: xi_1..xi_n, weight, log_ft, density. One row per grid node.
void write_density_csv(std::ostream& out, const EmbeddingReport& r, int dim);
/// Columns: N, a_N, closed_form_value, numeric_I, verdict.
void write_counterexample_csv(std::ostream& out, const std::vector<CounterexampleRecord>& rows);

}  // namespace lzero
