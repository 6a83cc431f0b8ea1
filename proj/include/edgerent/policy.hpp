#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "edgerent/model.hpp"

namespace edgerent {

enum class Phase { kExplore, kSemiExplore, kExploit, kNone };

/// "explore", "semi-explore", "exploit" or "-".
std::string to_string(Phase phase);

/// What a policy can see at the start of a slot.
struct SlotView {
    std::int64_t t = 1;                       // 1-based slot index
    int dims = 1;                             // context dimension D
    std::span<const double> contexts;         // N x D, row-major
    std::span<const double> expected_demand;  // true means; only the oracle reads it

    std::span<const double> context(std::size_t n) const {
        return contexts.subspan(n * static_cast<std::size_t>(dims), static_cast<std::size_t>(dims));
    }
};

struct Decision {
    RentalDecision rental;
    Phase phase = Phase::kNone;
    /// Measured approximation ratio of this slot's solve, when known.
    std::optional<double> delta;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual Decision decide(const SlotView& slot) = 0;
    /// `demand` holds the realized demand of every SBS; bandit policies must
    /// only learn from what their decision reveals.
    virtual void observe(const SlotView& slot, const Decision& decision,
                         std::span<const double> demand) = 0;
};

}  // namespace edgerent
