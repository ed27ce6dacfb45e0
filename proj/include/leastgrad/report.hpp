#pragma once

#include <json.hpp>

#include "leastgrad/barrier.hpp"
#include "leastgrad/functional.hpp"
#include "leastgrad/imaging.hpp"
#include "leastgrad/metric.hpp"
#include "leastgrad/solver.hpp"
#include "leastgrad/structure.hpp"

namespace leastgrad {

using Json = nlohmann::ordered_json;

Json to_json(const EnergyBreakdown& e);
Json to_json(const GapReport& g);
/// Wall time is left out unless asked for, so that repeated runs serialise
/// to identical bytes.
Json to_json(const SolveReport& r, bool include_timing = false);
Json to_json(const MetricValidation& v);
Json to_json(const AlignmentReport& r);
Json to_json(const BoundaryJumpReport& r, const DomainMask& mask);
Json to_json(const std::vector<ArcClassification>& arcs);
Json to_json(const BarrierReport& r, const BarrierSummary& s);
Json to_json(const ImagingReport& r, bool include_timing = false);

std::vector<GapSample> history_from_json(const Json& j);
Json history_to_json(const std::vector<GapSample>& history);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace leastgrad
