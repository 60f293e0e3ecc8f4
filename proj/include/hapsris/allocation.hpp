#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hapsris/association.hpp"
#include "hapsris/gp_solver.hpp"

namespace hapsris {

enum class Method { algorithm1, benchmark };

std::string_view to_string(Method method);
Method method_from_string(std::string_view text);

/// A stranded UE and its effective CS -> HAPS-RIS -> UE gain.
struct Candidate {
    int ue = 0;
    GainLinear h_sq;
};

struct ServedUe {
    int ue = 0;
    double h_sq = 0.0;
    double p_w = 0.0;
    long long n_units = 0;
    double rate_bps = 0.0;
};

struct AllocationResult {
    Method method = Method::algorithm1;
    /// Beyond-cell candidates, ascending UE id.
    std::vector<int> candidates;
    /// u_k for each entry of `candidates`.
    std::vector<bool> admitted;
    /// Served UEs in admission order (descending gain).
    std::vector<ServedUe> served;
    double total_power_w = 0.0;
    long long total_units = 0;
    /// True when stage 2 kept the stage-1 point because rounding made things worse.
    bool kept_stage1_point = false;
    int dropped_after_rounding = 0;

    double total_consumed_w(double ris_unit_power_w) const
    {
        return total_power_w + ris_unit_power_w * static_cast<double>(total_units);
    }
};

/// 2^(R / B) - 1.
double gamma_min(double rate_bps, double bandwidth_hz);

/// Smallest integer N with B log2(1 + p |h|^2 (rho N)^2 / (N0 B)) >= R, in closed form:
/// ceil(sqrt(N0 B gamma_min / (p rho^2 |h|^2))). Saturates at LLONG_MAX.
long long min_units(PowerW p, GainLinear h_sq, double gamma_min, const NoiseSpec& noise, double rho);

/// Stranded UEs with their effective gains, ascending id.
std::vector<Candidate> stranded_candidates(const ChannelState& channels, const AssociationResult& association);

/// Candidates by descending gain, ties by ascending UE id.
std::vector<Candidate> sort_by_gain(std::span<const Candidate> candidates);

/// Equal power share min(P_max / |K2|, P_k,max).
double equal_power_share(std::size_t num_candidates, const ScenarioConfig& config);

struct Stage1Result {
    std::vector<Candidate> sorted;
    double equal_power_w = 0.0;
    /// Admitted UEs with their seed point (equal power, minimum units).
    std::vector<ServedUe> admitted;
};

/// Greedy admission under equal power: walk UEs by descending gain and admit each
/// one whose minimum unit count fits the remaining budget and per-UE caps.
/// UEs failing a check are skipped; the walk continues.
Stage1Result stage1_select(std::span<const Candidate> k2, const ScenarioConfig& config);

/// Stage-2 instance for a served set.
Stage2Instance make_stage2_instance(std::span<const ServedUe> served, const ScenarioConfig& config);

/// Optimal power / unit split for a stage-1 set. Solves the relaxation, rounds,
/// and keeps whichever of the rounded optimum and the (power-tightened) stage-1
/// point has the lower objective. Without a feasible point the weakest UE is
/// dropped and the problem re-solved. Throws SolverError on numerical failure.
AllocationResult stage2_allocate(const Stage1Result& stage1, const ScenarioConfig& config,
                                 const BarrierOptions& options = {});

/// Equal power, then admit by descending gain with minimum units until the unit
/// budget or a per-UE cap is hit. No re-optimization.
AllocationResult benchmark_allocate(std::span<const Candidate> k2, const ScenarioConfig& config);

/// Stage 1 followed by stage 2 on the stranded set of `association`.
AllocationResult run_algorithm1(const Scenario& scenario, const ChannelState& channels,
                                const AssociationResult& association, const BarrierOptions& options = {});

/// Re-derives every served UE's rate from (p, n, |h|^2) and checks all budgets
/// and caps. Throws InfeasibleError on the first violation.
void verify_allocation(const AllocationResult& result, const ScenarioConfig& config);

}  // namespace hapsris
