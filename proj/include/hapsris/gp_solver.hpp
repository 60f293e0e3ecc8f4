#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hapsris {

/// Continuous relaxation of the joint CS-power / RIS-unit minimization for a fixed
/// served set:
///
///   min  sum_k  w_p p_k + w_n P_RIS n_k
///   s.t. p_k n_k^2 >= c_k                     (rate target, perfect alignment)
///        sum p_k <= P_max,  sum n_k <= N_max
///        p_floor <= p_k <= P_k,max,  n_floor <= n_k <= N_k,max
///
/// with c_k = gamma_min N0 B / (rho^2 |h_k|^2).
struct Stage2Instance {
    std::vector<double> qos_constant;  ///< c_k, W * units^2
    std::vector<double> power_cap;     ///< P_k,max, W
    std::vector<double> unit_cap;      ///< N_k,max
    double unit_power = 7.8e-3;        ///< P_RIS, W per unit
    double power_budget = 1.0;         ///< P_max, W
    double unit_budget = 1.0;          ///< N_max
    double power_floor = 1e-9;
    double unit_floor = 1.0;
    double power_weight = 1.0;  ///< 0 drops the CS power term
    double unit_weight = 1.0;   ///< 0 drops the RIS term

    std::size_t size() const { return qos_constant.size(); }
    void validate() const;

    double objective(const std::vector<double>& p, const std::vector<double>& n) const;

    /// Per-UE unit range implied by all box constraints (n_lo may exceed n_hi).
    double unit_lower(std::size_t k) const;
    double unit_upper(std::size_t k) const;

    /// Largest relative violation of any constraint at (p, n); <= 0 means feasible.
    double max_violation(const std::vector<double>& p, const std::vector<double>& n) const;
};

enum class SolveStatus { optimal, infeasible, max_iterations };

const char* to_string(SolveStatus status);

struct Stage2Solution {
    std::vector<double> p;
    std::vector<double> n;
    double objective = 0.0;
    SolveStatus status = SolveStatus::infeasible;
    double kkt_residual = 0.0;
    double duality_gap = 0.0;
    int newton_steps = 0;
    /// For infeasible instances: which requirement cannot be met.
    std::string certificate;
};

struct BarrierOptions {
    double initial_t = 1.0;
    double t_growth = 10.0;
    double newton_tolerance = 1e-10;  ///< on lambda^2 / 2
    double gap_tolerance = 1e-9;      ///< stop when m / t <= tol * (1 + |f|)
    int max_newton_steps = 5000;
    std::ostream* trace = nullptr;    ///< one line per Newton step when set
};

/// Log-barrier interior-point method on x = ln p, y = ln n. The rate targets are
/// linear in (x, y), the budgets are log-sum-exp. A phase-1 program supplies
/// the strictly feasible start or proves infeasibility.
Stage2Solution solve(const Stage2Instance& instance, const BarrierOptions& options = {});

/// Independent reference: eliminate p_k = c_k / n_k^2, minimize each UE in closed
/// form for fixed budget multipliers, and find the multipliers by nested
/// bisection (power budget inside, unit budget outside).
Stage2Solution oracle_kkt(const Stage2Instance& instance);

/// Quick necessary-condition check. Empty when none of the simple bounds fail.
std::string infeasibility_certificate(const Stage2Instance& instance);

struct IntegerSolution {
    std::vector<double> p;
    std::vector<long long> n;
    double objective = 0.0;
    bool feasible = false;
    int decrements = 0;
    std::string reason;
};

/// Ceils every n_k, then while the unit budget is exceeded removes one unit from
/// the UE whose power rises least (never below its rate-feasible floor), and
/// finally sets p_k = max(c_k / n_k^2, p_floor). `feasible` is false when the
/// repaired point breaks the power budget or no decrement is possible.
IntegerSolution round_and_repair(const Stage2Solution& solution, const Stage2Instance& instance);

}  // namespace hapsris
