#pragma once

#include <json.hpp>

#include "fixpoint/conditions.hpp"
#include "fixpoint/function_classes.hpp"
#include "fixpoint/metric.hpp"
#include "fixpoint/solver.hpp"

namespace fixpoint::cli {

/// Index for finite spaces, a number on intervals, an array on boxes.
nlohmann::json point_json(const Point& p);

/// Non-finite doubles become strings ("nan", "inf", "-inf").
nlohmann::json number_json(double v);

nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const MembershipReport& r);
nlohmann::json to_json(const DominanceReport& r);
/// At most `violation_cap` violation records; violation_count is always exact.
nlohmann::json to_json(const ConditionReport& r, std::size_t violation_cap = 1000);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const UniquenessReport& r);
nlohmann::json to_json(const CauchyDiagnostic& d);
nlohmann::json to_json(const GeneralCondition& c);

}  // namespace fixpoint::cli
