#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hapsris/gp_solver.hpp"

namespace hapsris {

/// Which coupling budget is active at the optimum. Both cannot be strictly
/// active at once: unconstrained unit counts scale as c^(1/3) under either
/// multiplier, so the two budgets trace the same trade-off curve.
enum class BudgetRegime { slack, power_binding, units_binding };

/// Random feasible instance: c_k log-uniform in [1e2, 1e6], P_RIS = 7.8 mW,
/// per-UE power caps log-uniform in [0.5, 5] W, unit caps 5e4, budgets set
/// relative to the unconstrained optimum according to `regime`.
Stage2Instance random_stage2_instance(std::mt19937_64& rng, std::size_t m, BudgetRegime regime);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    bool quick = false;
    std::uint64_t seed = 20240601;
    BarrierOptions solver;
};

/// Built-in oracle suites: unit round trips, closed-form unit sizing against a
/// linear scan, barrier solver against the KKT oracle, reflection-gain bounds
/// and scenario invariants.
std::vector<ValidationCheck> run_validation(const ValidationOptions& options);

}  // namespace hapsris
