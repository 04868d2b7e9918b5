#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrsmem/protocols.hpp"

namespace qrsmem {

// One coordinate of the fault space: an X or Z on a touched qudit after a
// step, or an additive error on a measurement outcome.
struct FaultComponent {
    enum class Kind { X, Z, Flip };
    std::size_t step = 0;
    Kind kind = Kind::X;
    std::size_t qudit = 0;
};

std::vector<FaultComponent> fault_components(const Script& s);
// Fault events for a combination of components with the given coefficients.
std::vector<FaultEvent> to_events(const Script& s, const std::vector<FaultComponent>& comps, const Vec& coefs);

// Checks and observed values are affine in the fault coefficients once random
// outcomes are pinned to zero; the model stores the offset and one response
// per component.
using Observer = std::function<Vec(const Tableau&)>;

struct ResponseModel {
    std::vector<FaultComponent> components;
    Vec base_checks;
    Vec base_observed;
    std::vector<Vec> check_response;
    std::vector<Vec> observed_response;
};

ResponseModel linear_response(const Script& s, const Tableau& initial, const Observer& observe);

struct SweepOptions {
    std::size_t max_faults = 1;  // 1 or 2
    unsigned jobs = 1;
};

struct SweepReport {
    std::size_t locations = 0;
    std::uint64_t configurations = 0;  // fault configurations covered
    std::uint64_t accepted = 0;
    std::uint64_t violations = 0;
    std::size_t max_accepted_x_weight = 0;
    std::size_t faults_checked = 0;
    // First violation found: its events and the X weight left on the cat.
    std::vector<FaultEvent> counterexample;
    std::size_t counterexample_weight = 0;
};

// Exhaustive sweep of the cat preparation script: every fault configuration
// with at most max_faults faulty steps is checked against the contract that
// an accepted cat carries X weight at most the number of faults.
SweepReport sweep_cat_preparation(const FieldPtr& ctx, const Vec& gammas, const CatPrepOptions& prep,
                                  const SweepOptions& opt);

// Minimum X weight of the cat residual from link values (size C-1).
std::size_t cat_x_weight(const FieldCtx& f, const Vec& gammas, const Vec& link_values);

}  // namespace qrsmem
