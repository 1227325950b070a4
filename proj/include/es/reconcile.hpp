#pragma once

#include <optional>
#include <string>
#include <vector>

#include "es/catalog.hpp"

namespace es {

// A numbered worked example as printed: family, stated parameters, m, n, denominators.
struct WorkedExample {
    std::string id;
    std::string family;
    std::string stated;  // "s=3,t=2,d=0"
    u64 m = 0;
    u64 n = 0;
    u64 printed[3] = {0, 0, 0};
    u64 printed_m1 = 0;  // 0 when the example prints no m1
};

const std::vector<WorkedExample>& worked_examples();

struct Correction {
    std::string example_id;
    std::string field;  // params, n, m1, n1, n2, n3 (printed position)
    std::string printed;
    std::string corrected;
};

struct PrintedFormAudit {
    std::string text;
    bool is_congruence = false;
    enum class Status { Consistent, Inconsistent, Unevaluable } status = Status::Consistent;
    u64 mismatches = 0;
    std::string detail;
};

struct RowAudit {
    std::string id;
    u64 grid_points = 0;
    u64 identity_failures = 0;
    u64 congruence_failures = 0;
    u64 outside_case_notes = 0;  // grid points violating a case note that still verify
    std::string first_failure;
    std::string rederived;  // construction-derived m form, filled when the row fails
    std::vector<PrintedFormAudit> printed;
};

struct ExampleAudit {
    const WorkedExample* example = nullptr;
    std::string stated_label;
    std::string stated_error;     // instantiation failure for the stated parameters
    bool reproduces = false;      // stated parameters give the printed m, n, n1
    std::string corrected_label;  // parameters recovered from the printed m, when needed
    std::optional<SolutionTriple> triple;  // verified triple for the true n = 24m+1
    bool printed_triple_verifies = false;
    std::vector<Correction> corrections;
};

struct ReconciliationReport {
    std::vector<RowAudit> rows;
    std::vector<ExampleAudit> examples;

    bool catalog_clean() const;
    std::vector<Correction> corrections() const;
    std::string text() const;
    std::string corrections_tsv() const;  // example_id, field, printed, corrected
};

ReconciliationReport reconcile(const Catalog& cat);

}  // namespace es
