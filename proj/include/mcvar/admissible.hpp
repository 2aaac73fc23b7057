#pragma once

#include <string>
#include <vector>

#include "mcvar/field.hpp"

namespace mcvar {

enum class CondStatus { Satisfied, Borderline, Violated };

// One admissibility condition with its margin (threshold - observed). For
// strict inequalities, a margin within [0, 1e-12] is BORDERLINE, never
// satisfied.
struct Condition {
    std::string name;
    CondStatus status = CondStatus::Satisfied;
    bool required = true;
    double margin = 0;
    double threshold = 0;
    double observed = 0;
    int samples = 0;

    bool satisfied() const { return status == CondStatus::Satisfied; }
};

struct AdmissibilityReport {
    std::vector<Condition> conditions;
    std::vector<std::string> warnings;

    bool required_ok() const {
        for (const auto& c : conditions)
            if (c.required && !c.satisfied()) return false;
        return true;
    }
    const Condition* find(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Checks the hypotheses on the curvature trace h:
//   H_SMALLNESS            max |h| < (|B1|/|Omega|)^(1/n)        (strict)
//   H_BOUNDARY_CURV        |h(y)| <= (n-1)/n H_dOmega(y)         (n = 2)
//   GIAQUINTA_SUFFICIENT   max |h| <= (1-eps0) (|B1|/|Omega|)^(1/n)  (informational)
//   ONE_D_DEGENERATE       h(endpoints) = 0                      (n = 1)
// Samples all boundary sites plus 4x parametric oversampling; rectangle
// corners are excluded from the curvature condition with a warning.
AdmissibilityReport check_h(const BoundaryData& bd, const DomainSpec& spec, const Grid& grid,
                            double eps0, bool allow_1d_nonzero_h = false);

// Checks the computed field: H_LN_BALL ||H||_{L^n} < |B1|^(1/n) (strict) and
// the Giaquinta sufficient bound ||H||_{L^n} <= (1-eps0) |B1|^(1/n).
AdmissibilityReport check_H_field(const ScalarField& H, const DomainSpec& spec, double eps0);

} // namespace mcvar
