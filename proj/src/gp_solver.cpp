#include "hapsris/gp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace hapsris {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iterations: return "max-iterations";
    }
    return "unknown";
}

void Stage2Instance::validate() const
{
    const auto m = qos_constant.size();
    if (m == 0) throw std::invalid_argument("Stage2Instance: empty instance");
    if (power_cap.size() != m || unit_cap.size() != m)
        throw std::invalid_argument("Stage2Instance: per-UE vectors differ in length");
    auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    for (std::size_t k = 0; k < m; ++k) {
        if (!pos(qos_constant[k])) throw std::invalid_argument("Stage2Instance: c_k must be positive");
        if (!pos(power_cap[k]) || power_cap[k] < power_floor)
            throw std::invalid_argument("Stage2Instance: power cap below floor");
        if (!pos(unit_cap[k]) || unit_cap[k] < unit_floor)
            throw std::invalid_argument("Stage2Instance: unit cap below floor");
    }
    if (!pos(unit_power) || !pos(power_budget) || !pos(unit_budget) || !pos(power_floor) || !pos(unit_floor))
        throw std::invalid_argument("Stage2Instance: budgets, floors and P_RIS must be positive");
    if (power_weight < 0.0 || unit_weight < 0.0 || power_weight + unit_weight <= 0.0)
        throw std::invalid_argument("Stage2Instance: objective weights must be nonnegative, not both zero");
}

double Stage2Instance::objective(const std::vector<double>& p, const std::vector<double>& n) const
{
    double f = 0.0;
    for (std::size_t k = 0; k < size(); ++k) f += power_weight * p[k] + unit_weight * unit_power * n[k];
    return f;
}

double Stage2Instance::unit_lower(std::size_t k) const
{
    return std::max(unit_floor, std::sqrt(qos_constant[k] / power_cap[k]));
}

double Stage2Instance::unit_upper(std::size_t k) const
{
    return std::min(unit_cap[k], std::sqrt(qos_constant[k] / power_floor));
}

double Stage2Instance::max_violation(const std::vector<double>& p, const std::vector<double>& n) const
{
    double worst = -std::numeric_limits<double>::infinity();
    double sum_p = 0.0, sum_n = 0.0;
    for (std::size_t k = 0; k < size(); ++k) {
        worst = std::max(worst, 1.0 - p[k] * n[k] * n[k] / qos_constant[k]);
        worst = std::max(worst, p[k] / power_cap[k] - 1.0);
        worst = std::max(worst, 1.0 - p[k] / power_floor);
        worst = std::max(worst, n[k] / unit_cap[k] - 1.0);
        worst = std::max(worst, 1.0 - n[k] / unit_floor);
        sum_p += p[k];
        sum_n += n[k];
    }
    worst = std::max(worst, sum_p / power_budget - 1.0);
    worst = std::max(worst, sum_n / unit_budget - 1.0);
    return worst;
}

std::string infeasibility_certificate(const Stage2Instance& inst)
{
    double min_units = 0.0, min_power = 0.0;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        const double lo = inst.unit_lower(k), hi = inst.unit_upper(k);
        if (lo > hi * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "UE slot " << k << ": rate target needs more than " << inst.unit_cap[k]
               << " units at its power cap";
            return os.str();
        }
        min_units += lo;
        min_power += inst.qos_constant[k] / (hi * hi);
    }
    if (min_units > inst.unit_budget * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "unit budget " << inst.unit_budget << " cannot be met even with every UE at its power cap (needs "
           << min_units << ")";
        return os.str();
    }
    if (min_power > inst.power_budget * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "power budget " << inst.power_budget << " W cannot be met even with every UE at its unit cap (needs "
           << min_power << " W)";
        return os.str();
    }
    return {};
}

namespace {

// ---------------------------------------------------------------------------
// Barrier model in z = (x_1..x_m, y_1..y_m), x = ln p, y = ln n.
// Every constraint is written as slack(z) > 0.

struct Evaluation {
    double value = 0.0;
    VectorXd grad;
    MatrixXd hess;
};

class BarrierModel {
public:
    explicit BarrierModel(const Stage2Instance& inst) : inst_(inst), m_(static_cast<int>(inst.size()))
    {
        log_c_.resize(m_);
        log_pcap_.resize(m_);
        log_ncap_.resize(m_);
        for (int k = 0; k < m_; ++k) {
            log_c_[k] = std::log(inst.qos_constant[k]);
            log_pcap_[k] = std::log(inst.power_cap[k]);
            log_ncap_[k] = std::log(inst.unit_cap[k]);
        }
        log_pfloor_ = std::log(inst.power_floor);
        log_nfloor_ = std::log(inst.unit_floor);
        log_pbudget_ = std::log(inst.power_budget);
        log_nbudget_ = std::log(inst.unit_budget);
    }

    int m() const { return m_; }
    int num_constraints() const { return 5 * m_ + 2; }

    double objective(const VectorXd& z) const
    {
        double f = 0.0;
        for (int k = 0; k < m_; ++k)
            f += inst_.power_weight * std::exp(z[k]) + inst_.unit_weight * inst_.unit_power * std::exp(z[m_ + k]);
        return f;
    }

    /// All slacks in a fixed order: qos, pcap, pfloor, ncap, nfloor, pbudget, nbudget.
    VectorXd slacks(const VectorXd& z) const
    {
        VectorXd s(num_constraints());
        for (int k = 0; k < m_; ++k) {
            const double x = z[k], y = z[m_ + k];
            s[k] = x + 2.0 * y - log_c_[k];
            s[m_ + k] = log_pcap_[k] - x;
            s[2 * m_ + k] = x - log_pfloor_;
            s[3 * m_ + k] = log_ncap_[k] - y;
            s[4 * m_ + k] = y - log_nfloor_;
        }
        s[5 * m_] = log_pbudget_ - log_sum_exp(z.head(m_));
        s[5 * m_ + 1] = log_nbudget_ - log_sum_exp(z.tail(m_));
        return s;
    }

    /// Gradient of each slack, one row per constraint, same order as slacks().
    MatrixXd slack_jacobian(const VectorXd& z) const
    {
        MatrixXd j = MatrixXd::Zero(num_constraints(), 2 * m_);
        for (int k = 0; k < m_; ++k) {
            j(k, k) = 1.0;
            j(k, m_ + k) = 2.0;
            j(m_ + k, k) = -1.0;
            j(2 * m_ + k, k) = 1.0;
            j(3 * m_ + k, m_ + k) = -1.0;
            j(4 * m_ + k, m_ + k) = 1.0;
        }
        j.row(5 * m_).head(m_) = -softmax(z.head(m_)).transpose();
        j.row(5 * m_ + 1).tail(m_) = -softmax(z.tail(m_)).transpose();
        return j;
    }

    /// Adds sum_i -log(slack_i(z) + shift). With `shift_index` >= 0 the shift is
    /// the variable at that index (phase 1). Returns false outside the domain.
    bool add_barrier(const VectorXd& z, double shift, int shift_index, bool need_hess, Evaluation& ev) const
    {
        const VectorXd s = slacks(z).array() + shift;
        if (!(s.minCoeff() > 0.0)) return false;
        const bool sv = shift_index >= 0;

        auto add_sparse = [&](double sl, std::initializer_list<std::pair<int, double>> g) {
            ev.value -= std::log(sl);
            const double inv = 1.0 / sl;
            for (auto [i, a] : g) ev.grad[i] -= a * inv;
            if (sv) ev.grad[shift_index] -= inv;
            if (!need_hess) return;
            const double inv2 = inv * inv;
            for (auto [i, a] : g) {
                for (auto [j, b] : g) ev.hess(i, j) += a * b * inv2;
                if (sv) {
                    ev.hess(i, shift_index) += a * inv2;
                    ev.hess(shift_index, i) += a * inv2;
                }
            }
            if (sv) ev.hess(shift_index, shift_index) += inv2;
        };

        for (int k = 0; k < m_; ++k) {
            const int ix = k, iy = m_ + k;
            add_sparse(s[k], {{ix, 1.0}, {iy, 2.0}});
            add_sparse(s[m_ + k], {{ix, -1.0}});
            add_sparse(s[2 * m_ + k], {{ix, 1.0}});
            add_sparse(s[3 * m_ + k], {{iy, -1.0}});
            add_sparse(s[4 * m_ + k], {{iy, 1.0}});
        }

        // Budgets: slack = log B - lse(v), grad slack = -softmax(v),
        // hess slack = -(diag(sigma) - sigma sigma^T).
        for (int block = 0; block < 2; ++block) {
            const int off = block * m_;
            const double sl = s[5 * m_ + block];
            const VectorXd v = z.segment(off, m_);
            const VectorXd sigma = softmax(v);
            ev.value -= std::log(sl);
            const double inv = 1.0 / sl;
            ev.grad.segment(off, m_) += sigma * inv;
            if (sv) ev.grad[shift_index] -= inv;
            if (!need_hess) continue;
            const double inv2 = inv * inv;
            auto h = ev.hess.block(off, off, m_, m_);
            h += sigma * sigma.transpose() * (inv2 - inv);
            h.diagonal() += sigma * inv;
            if (sv) {
                ev.hess.block(off, shift_index, m_, 1) -= sigma * inv2;
                ev.hess.block(shift_index, off, 1, m_) -= sigma.transpose() * inv2;
                ev.hess(shift_index, shift_index) += inv2;
            }
        }
        return true;
    }

    /// t * f(z) / scale, with derivatives.
    void add_objective(const VectorXd& z, double t, double scale, bool need_hess, Evaluation& ev) const
    {
        for (int k = 0; k < m_; ++k) {
            const double a = t * inst_.power_weight * std::exp(z[k]) / scale;
            const double b = t * inst_.unit_weight * inst_.unit_power * std::exp(z[m_ + k]) / scale;
            ev.value += a + b;
            ev.grad[k] += a;
            ev.grad[m_ + k] += b;
            if (need_hess) {
                ev.hess(k, k) += a;
                ev.hess(m_ + k, m_ + k) += b;
            }
        }
    }

    VectorXd start_point() const
    {
        VectorXd z(2 * m_);
        const double share = std::log(inst_.power_budget / m_);
        const double ushare = std::log(inst_.unit_budget / m_);
        for (int k = 0; k < m_; ++k) {
            const double xlo = log_pfloor_, xhi = log_pcap_[k];
            const double ylo = log_nfloor_, yhi = log_ncap_[k];
            double x = std::clamp(share, xlo, xhi);
            double y = std::clamp(0.5 * (log_c_[k] - x), ylo, yhi);
            y = std::min(y, ushare);
            // Stay off the box faces.
            const double px = 1e-3 * std::max(xhi - xlo, 1e-12);
            const double py = 1e-3 * std::max(yhi - ylo, 1e-12);
            z[k] = std::clamp(x, xlo + px, xhi - px);
            z[m_ + k] = std::clamp(y, ylo + py, yhi - py);
        }
        return z;
    }

    static double log_sum_exp(const VectorXd& v)
    {
        const double mx = v.maxCoeff();
        return mx + std::log((v.array() - mx).exp().sum());
    }

    static VectorXd softmax(const VectorXd& v)
    {
        const double mx = v.maxCoeff();
        VectorXd e = (v.array() - mx).exp();
        return e / e.sum();
    }

private:
    const Stage2Instance& inst_;
    int m_;
    VectorXd log_c_, log_pcap_, log_ncap_;
    double log_pfloor_, log_nfloor_, log_pbudget_, log_nbudget_;
};

// Damped Newton on a barrier function. `eval(v, need_hess, ev)` returns false
// outside the domain. Stops on the decrement, on `early_exit(v)`, or when the
// step budget runs out.
template <class Eval, class Exit>
bool centre(VectorXd& v, Eval&& eval, Exit&& early_exit, double tol, int& steps_left, int& steps_taken,
            std::ostream* trace, double t)
{
    const int dim = static_cast<int>(v.size());
    Evaluation ev;
    double prev_decrement = std::numeric_limits<double>::infinity();
    while (steps_left > 0) {
        ev.value = 0.0;
        ev.grad = VectorXd::Zero(dim);
        ev.hess = MatrixXd::Zero(dim, dim);
        if (!eval(v, true, ev)) return false;

        Eigen::LDLT<MatrixXd> ldlt(ev.hess);
        VectorXd step = -ldlt.solve(ev.grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite() || ev.grad.dot(step) >= 0.0) {
            // Fall back to a regularized system.
            MatrixXd reg = ev.hess;
            reg.diagonal().array() += 1e-10 * (1.0 + ev.hess.diagonal().cwiseAbs().maxCoeff());
            step = -reg.llt().solve(ev.grad);
            if (!step.allFinite()) return false;
        }
        const double slope = ev.grad.dot(step);
        const double decrement = -slope / 2.0;
        --steps_left;
        ++steps_taken;
        if (trace) *trace << "newton t=" << t << " value=" << ev.value << " decrement=" << decrement << '\n';
        if (decrement <= tol) return true;
        // The value grows like t. Once the decrement is below its rounding noise and no
        // longer shrinking quadratically, further steps cannot be verified.
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(ev.value);
        if (decrement <= noise && decrement > 0.25 * prev_decrement) return true;
        prev_decrement = decrement;

        // Backtracking with an allowance for cancellation in large barrier values.
        const double allowance = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(ev.value));
        double alpha = 1.0;
        bool moved = false;
        Evaluation trial;
        // Inside the quadratic region take the full step; value comparisons are noise there.
        if (decrement < 0.05) {
            const VectorXd cand = v + step;
            trial.value = 0.0;
            trial.grad = VectorXd::Zero(dim);
            if (eval(cand, false, trial)) {
                v = cand;
                moved = true;
            }
        }
        for (int ls = 0; !moved && ls < 80; ++ls, alpha *= 0.5) {
            const VectorXd cand = v + alpha * step;
            trial.value = 0.0;
            trial.grad = VectorXd::Zero(dim);
            if (!eval(cand, false, trial)) continue;
            if (trial.value <= ev.value + 0.01 * alpha * slope + allowance) {
                v = cand;
                moved = true;
                break;
            }
        }
        if (!moved) return decrement <= 1e2 * std::max(tol, noise);
        if (early_exit(v)) return true;
    }
    return false;
}

/// Dual feasibility at z: multipliers are fitted by least squares on the constraints
/// whose barrier estimate 1 / (t slack) is non-negligible, negatives clipped, and the
/// remaining Lagrangian gradient is reported relative to the objective gradient.
double stationarity_residual(const BarrierModel& model, const VectorXd& z, const VectorXd& grad_f, double t)
{
    const VectorXd s = model.slacks(z);
    const MatrixXd jac = model.slack_jacobian(z);
    const double gscale = grad_f.cwiseAbs().maxCoeff();
    std::vector<int> active;
    for (int i = 0; i < s.size(); ++i)
        if (1.0 / (t * s[i]) > 1e-6 * (1.0 + gscale)) active.push_back(i);
    VectorXd r = grad_f;
    if (!active.empty()) {
        MatrixXd a(z.size(), static_cast<Eigen::Index>(active.size()));
        for (std::size_t j = 0; j < active.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = jac.row(active[j]).transpose();
        const VectorXd mu = a.colPivHouseholderQr().solve(grad_f).cwiseMax(0.0);
        r -= a * mu;
    }
    return r.cwiseAbs().maxCoeff() / (1.0 + gscale);
}

}  // namespace

Stage2Solution solve(const Stage2Instance& inst, const BarrierOptions& opt)
{
    inst.validate();
    BarrierModel model(inst);
    const int m = model.m();
    const int dim = 2 * m;
    const double mc = model.num_constraints();

    Stage2Solution out;
    int steps_left = opt.max_newton_steps;
    VectorXd z = model.start_point();

    // Phase 1: min s subject to slack_i(z) + s > 0.
    if (!(model.slacks(z).minCoeff() > 0.0)) {
        VectorXd v(dim + 1);
        v.head(dim) = z;
        v[dim] = std::max(0.0, -model.slacks(z).minCoeff()) + 1.0;
        double t = opt.initial_t;
        auto eval = [&](const VectorXd& w, bool hess, Evaluation& ev) {
            ev.value += t * w[dim];
            ev.grad[dim] += t;
            return model.add_barrier(w.head(dim), w[dim], dim, hess, ev);
        };
        auto feasible = [&](const VectorXd& w) { return w[dim] < 0.0; };
        bool found = false;
        for (;;) {
            const bool ok = centre(v, eval, feasible, opt.newton_tolerance, steps_left, out.newton_steps, opt.trace, t);
            if (feasible(v)) {
                found = true;
                break;
            }
            if (!ok && steps_left <= 0) break;
            // Lower bound on the phase-1 optimum: s - mc / t.
            if (mc / t <= opt.gap_tolerance * (1.0 + std::fabs(v[dim])) || v[dim] - mc / t > 0.0) break;
            t *= opt.t_growth;
        }
        if (!found) {
            out.status = steps_left <= 0 ? SolveStatus::max_iterations : SolveStatus::infeasible;
            out.certificate = infeasibility_certificate(inst);
            if (out.certificate.empty()) out.certificate = "no strictly feasible point (phase-1 optimum >= 0)";
            return out;
        }
        z = v.head(dim);
    }

    // Phase 2.
    const double scale = std::max(model.objective(z), 1e-300);
    double t = opt.initial_t;
    auto eval = [&](const VectorXd& w, bool hess, Evaluation& ev) {
        model.add_objective(w, t, scale, hess, ev);
        return model.add_barrier(w, 0.0, -1, hess, ev);
    };
    auto never = [](const VectorXd&) { return false; };
    bool converged = false;
    for (;;) {
        const bool ok = centre(z, eval, never, opt.newton_tolerance, steps_left, out.newton_steps, opt.trace, t);
        const double f = model.objective(z);
        out.duality_gap = mc / t * scale;
        if (opt.trace) *opt.trace << "outer t=" << t << " objective=" << f << " gap=" << out.duality_gap << '\n';
        if (ok && out.duality_gap <= opt.gap_tolerance * (1.0 + std::fabs(f))) {
            converged = true;
            break;
        }
        if (steps_left <= 0) break;
        t *= opt.t_growth;
    }

    out.p.resize(m);
    out.n.resize(m);
    for (int k = 0; k < m; ++k) {
        out.p[k] = std::exp(z[k]);
        out.n[k] = std::exp(z[m + k]);
    }
    out.objective = inst.objective(out.p, out.n);

    VectorXd grad_f(dim);
    for (int k = 0; k < m; ++k) {
        grad_f[k] = inst.power_weight * out.p[k] / scale;
        grad_f[m + k] = inst.unit_weight * inst.unit_power * out.n[k] / scale;
    }
    out.kkt_residual = stationarity_residual(model, z, grad_f, t);
    out.status = converged ? SolveStatus::optimal : SolveStatus::max_iterations;
    return out;
}

// ---------------------------------------------------------------------------
// KKT oracle

namespace {

struct DualPoint {
    double lambda = 0.0;  // power budget
    double mu = 0.0;      // unit budget
};

class DualOracle {
public:
    explicit DualOracle(const Stage2Instance& inst) : inst_(inst)
    {
        for (std::size_t k = 0; k < inst.size(); ++k) {
            lo_.push_back(inst.unit_lower(k));
            hi_.push_back(inst.unit_upper(k));
        }
    }

    /// argmin_n (w_p + lambda) c / n^2 + (w_n P_RIS + mu) n over [lo, hi].
    double units(std::size_t k, DualPoint d) const
    {
        const double a = inst_.power_weight + d.lambda;
        const double b = inst_.unit_weight * inst_.unit_power + d.mu;
        double n;
        if (a <= 0.0)
            n = lo_[k];
        else if (b <= 0.0)
            n = hi_[k];
        else
            n = std::cbrt(2.0 * a * inst_.qos_constant[k] / b);
        return std::clamp(n, lo_[k], hi_[k]);
    }

    double total_power(DualPoint d) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < inst_.size(); ++k) {
            const double n = units(k, d);
            s += inst_.qos_constant[k] / (n * n);
        }
        return s;
    }

    double total_units(DualPoint d) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < inst_.size(); ++k) s += units(k, d);
        return s;
    }

    /// Smallest lambda >= 0 with total_power <= budget, or +inf if none.
    double power_multiplier(double mu) const
    {
        if (total_power({0.0, mu}) <= inst_.power_budget) return 0.0;
        double hi = 1.0;
        while (total_power({hi, mu}) > inst_.power_budget) {
            hi *= 4.0;
            if (hi > 1e300) return std::numeric_limits<double>::infinity();
        }
        return bisect(0.0, hi, [&](double lam) { return total_power({lam, mu}) <= inst_.power_budget; });
    }

    /// Smallest x in (lo, hi] with ok(x), given ok(hi) and !ok(lo).
    template <class Pred>
    static double bisect(double lo, double hi, Pred ok)
    {
        for (int it = 0; it < 400; ++it) {
            // Geometric midpoint once the bracket is away from zero.
            const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
            if (!(mid > lo && mid < hi)) break;
            (ok(mid) ? hi : lo) = mid;
            if (lo > 0.0 && hi / lo - 1.0 < 1e-15) break;
            if (lo == 0.0 && hi < 1e-300) break;
        }
        return hi;
    }

private:
    const Stage2Instance& inst_;
    std::vector<double> lo_, hi_;
};

}  // namespace

Stage2Solution oracle_kkt(const Stage2Instance& inst)
{
    inst.validate();
    Stage2Solution out;
    if (auto cert = infeasibility_certificate(inst); !cert.empty()) {
        out.status = SolveStatus::infeasible;
        out.certificate = std::move(cert);
        return out;
    }
    DualOracle oracle(inst);
    auto units_at = [&](double mu) {
        const double lam = oracle.power_multiplier(mu);
        return std::isfinite(lam) ? oracle.total_units({lam, mu}) : std::numeric_limits<double>::infinity();
    };

    double mu = 0.0;
    if (!(units_at(0.0) <= inst.unit_budget)) {
        double hi = 1e-6;
        while (!(units_at(hi) <= inst.unit_budget)) {
            hi *= 4.0;
            if (hi > 1e300) {
                out.status = SolveStatus::infeasible;
                out.certificate = "power and unit budgets cannot be met jointly";
                return out;
            }
        }
        mu = DualOracle::bisect(0.0, hi, [&](double x) { return units_at(x) <= inst.unit_budget; });
    }
    const DualPoint d{oracle.power_multiplier(mu), mu};

    const auto m = inst.size();
    out.p.resize(m);
    out.n.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.n[k] = oracle.units(k, d);
        out.p[k] = inst.qos_constant[k] / (out.n[k] * out.n[k]);
    }
    out.objective = inst.objective(out.p, out.n);
    out.status = SolveStatus::optimal;

    // Stationarity residual of the reduced problem at interior UEs.
    double worst = 0.0, gscale = 0.0;
    const double a = inst.power_weight + d.lambda;
    const double b = inst.unit_weight * inst.unit_power + d.mu;
    for (std::size_t k = 0; k < m; ++k) {
        const double g = -2.0 * a * inst.qos_constant[k] / (out.n[k] * out.n[k] * out.n[k]) + b;
        gscale = std::max(gscale, b);
        const bool at_lo = out.n[k] <= inst.unit_lower(k) * (1.0 + 1e-12);
        const bool at_hi = out.n[k] >= inst.unit_upper(k) * (1.0 - 1e-12);
        if ((at_lo && g >= 0.0) || (at_hi && g <= 0.0)) continue;
        worst = std::max(worst, std::fabs(g));
    }
    out.kkt_residual = worst / (1.0 + gscale);
    return out;
}

// ---------------------------------------------------------------------------

IntegerSolution round_and_repair(const Stage2Solution& sol, const Stage2Instance& inst)
{
    if (sol.status != SolveStatus::optimal)
        throw std::invalid_argument("round_and_repair: solution is not optimal");
    const auto m = inst.size();
    IntegerSolution out;
    out.n.resize(m);
    std::vector<long long> floor_units(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double nk = sol.n[k];
        const double near = std::nearbyint(nk);
        // Treat values within rounding noise of an integer as that integer.
        const double target = std::fabs(nk - near) <= 1e-9 * std::max(1.0, nk) ? near : std::ceil(nk);
        const auto cap = static_cast<long long>(std::floor(inst.unit_cap[k] + 1e-9));
        out.n[k] = std::min(static_cast<long long>(target), cap);
        floor_units[k] = static_cast<long long>(std::ceil(inst.unit_lower(k) * (1.0 - 1e-12)));
        out.n[k] = std::max(out.n[k], floor_units[k]);
    }

    long long total = std::accumulate(out.n.begin(), out.n.end(), 0LL);
    const auto budget = static_cast<long long>(std::floor(inst.unit_budget + 1e-9));
    while (total > budget) {
        std::size_t pick = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) {
            if (out.n[k] - 1 < floor_units[k]) continue;
            const double n = static_cast<double>(out.n[k]);
            const double extra = inst.qos_constant[k] / ((n - 1.0) * (n - 1.0)) - inst.qos_constant[k] / (n * n);
            if (extra < best) {
                best = extra;
                pick = k;
            }
        }
        if (pick == m) {
            out.reason = "unit budget exceeded after rounding and no UE can give up a unit";
            return out;
        }
        --out.n[pick];
        --total;
        ++out.decrements;
    }

    out.p.resize(m);
    double sum_p = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double n = static_cast<double>(out.n[k]);
        out.p[k] = std::max(inst.qos_constant[k] / (n * n), inst.power_floor);
        sum_p += out.p[k];
    }
    std::vector<double> nd(out.n.begin(), out.n.end());
    out.objective = inst.objective(out.p, nd);
    if (sum_p > inst.power_budget * (1.0 + 1e-12)) {
        out.reason = "power budget exceeded after rounding repair";
        return out;
    }
    out.feasible = true;
    return out;
}

}  // namespace hapsris
