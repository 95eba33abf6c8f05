#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rectfree/measure.hpp"
#include "rectfree/spherical_mc.hpp"

namespace rectfree {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    /// Largest observed violation metric (error, or error / allowed error).
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceConfig {
    /// Every tolerance is multiplied by this factor; 0 forces failures (test hook).
    double tolerance_scale = 1.0;
    /// Criterion ids to run ("1", "4", ...); empty runs all of them.
    std::vector<std::string> only;
    std::uint64_t seed = 20100929;
    McOptions mc;
};

/// The three reference measures: delta_1, uniform{1/3, 2/3, 1}, and a seeded
/// random 6-atom measure with weights in multiples of 1/64.
struct ReferenceMeasure {
    std::string name;
    DiscreteMeasure measure;
};
std::vector<ReferenceMeasure> reference_measures();

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config);

/// One "[PASS] id title ..." line per result.
std::string format_report(const std::vector<CriterionResult>& results);
/// {"criteria": [...], "passed": bool}
std::string report_json(const std::vector<CriterionResult>& results);

} // namespace rectfree
