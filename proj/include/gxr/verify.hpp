#pragma once

#include "gxr/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gxr {

enum class CheckStatus { pass, fail, not_applicable };

/// One measured quantity inside a check. Passes when error <= tolerance.
struct Measurement {
    std::string label;
    double error = 0.0;
    double tolerance = 0.0;
};

struct CheckResult {
    std::string name;
    DiskModel model;
    CheckStatus status = CheckStatus::not_applicable;
    /// Worst measurement (largest error / tolerance).
    double error = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    std::vector<Measurement> measurements;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> results;

    bool passed() const;
    std::size_t count(CheckStatus status) const;
    std::string text() const;
    std::string json() const;
};

struct VerifyOptions {
    std::vector<DiskModel> models;
    /// Check names to run; empty runs all.
    std::vector<std::string> only;
    double tolerance_scale = 1.0;
    unsigned seed = 20240601;
};

/// (0,1), (0.5,1), (-0.5,1), (0.9,1), (-0.9,1), (0.3,1.5).
std::vector<DiskModel> default_models();

/// In suite order: svd, singular, norms, main_relation, intertwining_lemma,
/// intertwining, inversion, regularization, range, stability, derivatives,
/// unboundedness, end_to_end.
const std::vector<std::string>& check_names();

/// Throws Error for an unknown name.
CheckResult run_check(const std::string& name, const DiskModel& model, const VerifyOptions& options = {});

/// Every selected check once per model. progress (optional) sees each result as it completes.
VerificationReport run_verification(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& progress = {});

std::string to_string(CheckStatus status);

} // namespace gxr
