#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "urec/classical.hpp"
#include "urec/cmv.hpp"
#include "urec/fourier.hpp"
#include "urec/measure.hpp"
#include "urec/monitored.hpp"
#include "urec/schur.hpp"

// File schemas. Complex numbers travel as re/im pairs, angles in radians.
// Unknown keys are rejected so typos fail loudly instead of being ignored.
namespace urec::io {

using json = nlohmann::json;

json measure_to_json(const UnitCircleMeasure& m);
UnitCircleMeasure measure_from_json(const json& j, const Tolerances& tol = default_tol());

json chain_to_json(const MarkovChain& c);
MarkovChain chain_from_json(const json& j, const Tolerances& tol = default_tol());

json schur_to_json(const SchurRepresentation& f);
SchurRepresentation schur_from_json(const json& j);

json walk_to_json(const CoinedWalkSpec& w);
CoinedWalkSpec walk_from_json(const json& j);

MomentumSymbol symbol_from_json(const json& j, const Tolerances& tol = default_tol());

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

// CSV with a header row, '.' decimal point, ',' separator, 17 significant
// digits; the shared fixture format for plots and regression tests.
std::string format_sig17(double v);
std::string monitored_csv(const ArrivalRecord& rec);
std::string renewal_csv(std::span<const double> p, std::span<const double> q,
                        std::span<const double> q_sjk);
std::string phase_scan_csv(std::span<const PhaseScanPoint> pts);
void write_text(const std::string& path, const std::string& content);

}  // namespace urec::io
