#include "memsched/subsidy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace memsched {
namespace {

// Exact never-idle values at the two post-feedback beliefs. Both beliefs stay
// active, so V(p) = R(p) + b(p V(p) + (1-p) V(r)) and symmetrically for r;
// the 2x2 system solves in closed form.
AnchorValues all_active_anchors(const MarkovChannel& ch, const RewardModel& reward,
                                double discount) {
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    const double b = discount;
    const double rp = reward(p);
    const double rr = reward(r);
    const double den = (1.0 - b) * (1.0 + b * r - b * p);
    return AnchorValues{
        ((1.0 - b * (1.0 - r)) * rp + b * (1.0 - p) * rr) / den,
        ((1.0 - b * p) * rr + b * r * rp) / den,
    };
}

}  // namespace

SubsidyProblem SubsidyProblem::validated(MarkovChannel ch, RewardModel reward, double discount,
                                         double subsidy) {
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("discount must be in [0,1)");
    if (reward.low_rate() != ch.low_rate)
        throw std::invalid_argument("reward model low_rate does not match the channel low_rate");
    return SubsidyProblem{ch, std::move(reward), discount, subsidy};
}

ValueTable::ValueTable(std::vector<double> grid, std::vector<double> value, int sweeps)
    : grid_(std::move(grid)), value_(std::move(value)), sweeps_(sweeps) {}

double ValueTable::at(Belief x) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.end()) return value_.back();
    const auto i = static_cast<size_t>(it - grid_.begin());
    if (*it == x || i == 0) return value_[i];
    const double x0 = grid_[i - 1];
    const double x1 = grid_[i];
    const double w = (x - x0) / (x1 - x0);
    return value_[i - 1] * (1.0 - w) + value_[i] * w;
}

int ValueTable::exact_index(double x) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.end() || *it != x)
        throw std::logic_error("belief was not inserted into the value grid");
    return static_cast<int>(it - grid_.begin());
}

ThresholdClass classify_threshold(const SubsidyProblem& prob) {
    if (prob.subsidy >= 1.0) return ThresholdClass::always_idle();
    if (prob.subsidy <= prob.channel.low_rate) return ThresholdClass::always_active();
    return solve_threshold(prob);
}

double always_active_value(const SubsidyProblem& prob, Belief start) {
    const AnchorValues aa = all_active_anchors(prob.channel, prob.reward, prob.discount);
    return prob.reward(start) +
           prob.discount * (start * aa.after_high + (1.0 - start) * aa.after_low);
}

AnchorValues anchor_values(const SubsidyProblem& prob, const ThresholdClass& pi_star) {
    const MarkovChannel& ch = prob.channel;
    const RewardModel& reward = prob.reward;
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    const double b = prob.discount;
    const double w = prob.subsidy;
    const double idle_forever = w / (1.0 - b);

    if (pi_star.kind == ThresholdClass::Kind::always_idle) {
        if (w < 1.0) throw std::logic_error("always_idle threshold requires subsidy >= 1");
        return AnchorValues{idle_forever, idle_forever};
    }
    if (pi_star.kind == ThresholdClass::Kind::always_active) {
        if (w > ch.low_rate)
            throw std::logic_error("always_active threshold requires subsidy <= low_rate");
        return all_active_anchors(ch, reward, b);
    }

    const double t = pi_star.threshold;
    if (!(t > 0.0 && t < 1.0))
        throw std::logic_error("interior threshold must lie in (0,1)");
    const double pi0 = steady_state(ch);
    AnchorValues out;

    if (ch.positively_correlated()) {
        // Belief ordering: low_to_high <= steady <= stay_high.
        if (t >= p) {
            out = AnchorValues{idle_forever, idle_forever};
        } else if (t >= pi0) {
            const double vr = idle_forever;
            out = AnchorValues{(reward(p) + b * (1.0 - p) * vr) / (1.0 - b * p), vr};
        } else if (t >= r) {
            // From r: idle for L slots along the drift, then one transmit
            // step couples back into both anchors. Solving jointly with the
            // active recursion at p:
            const auto hit = hitting_time(ch, r, t);
            if (!hit) throw std::logic_error("finite hitting time expected below steady state");
            const long L = *hit;
            const double q = q_iterate(ch, r, L);
            const double bL = pow_int(b, L);
            const double num = (1.0 - bL) * (1.0 - b * p) * w +
                               (1.0 - b) * bL * ((1.0 - b * p) * reward(q) + b * q * reward(p));
            const double den = (1.0 - b) * (1.0 - b * p) * (1.0 - bL * b) +
                               (1.0 - b) * (1.0 - b) * q * bL * b;
            const double vr = num / den;
            out = AnchorValues{(reward(p) + b * (1.0 - p) * vr) / (1.0 - b * p), vr};
        } else {
            out = all_active_anchors(ch, reward, b);
        }
    } else {
        // Negative correlation: stay_high <= steady <= Q(stay_high) <= low_to_high.
        const double qp = q_step(ch, p);
        if (qp < p) throw std::logic_error("Q(stay_high) < stay_high under negative correlation");
        if (t >= r) {
            out = AnchorValues{idle_forever, idle_forever};
        } else if (t >= qp) {
            const double vp = idle_forever;
            out = AnchorValues{vp, (reward(r) + b * r * vp) / (1.0 - b * (1.0 - r))};
        } else if (t >= p) {
            // From stay_high: idle one slot, transmit at Q(stay_high);
            // low_to_high stays active. 2x2 system in the anchors.
            const double rq = reward(qp);
            const double rr = reward(r);
            const double den =
                (1.0 - b * (1.0 - r)) * (1.0 - b * b * qp) - b * b * b * r * (1.0 - qp);
            const double vr = (b * r * w + b * b * r * rq + (1.0 - b * b * qp) * rr) / den;
            const double vp =
                ((1.0 - b * (1.0 - r)) * (w + b * rq) + b * b * (1.0 - qp) * rr) / den;
            out = AnchorValues{vp, vr};
        } else {
            out = all_active_anchors(ch, reward, b);
        }
    }

    // Contract check: at an interior threshold the transmit and idle branches
    // must be indifferent.
    const double v1 = reward(t) + b * (t * out.after_high + (1.0 - t) * out.after_low);
    const double v0 = w + b * value_at(prob, pi_star, out, q_step(ch, t));
    if (std::abs(v1 - v0) > 1e-6)
        throw std::logic_error("inconsistent (threshold, subsidy) pair; indifference residual " +
                               std::to_string(v1 - v0));
    return out;
}

double value_at(const SubsidyProblem& prob, const ThresholdClass& pi_star,
                const AnchorValues& anchors, Belief pi) {
    const double b = prob.discount;
    const double w = prob.subsidy;
    if (pi_star.kind == ThresholdClass::Kind::always_idle) return w / (1.0 - b);

    std::optional<long> hit = 0;
    if (pi_star.kind == ThresholdClass::Kind::interior)
        hit = hitting_time(prob.channel, pi, pi_star.threshold);
    if (!hit) return w / (1.0 - b);

    const long k = *hit;
    const double bk = pow_int(b, k);
    const double reach = q_iterate(prob.channel, pi, k);
    const double transmit = prob.reward(reach) +
                            b * (reach * anchors.after_high + (1.0 - reach) * anchors.after_low);
    return w * (1.0 - bk) / (1.0 - b) + bk * transmit;
}

ValueTable value_iteration(const SubsidyProblem& prob, int grid_size, int max_sweeps, double tol,
                           std::span<const Belief> extra_points) {
    if (grid_size < 101) throw std::invalid_argument("value_iteration grid_size must be >= 101");
    const MarkovChannel& ch = prob.channel;
    const double b = prob.discount;
    const double w = prob.subsidy;
    const double pi0 = steady_state(ch);

    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(grid_size) + 4096);
    for (int i = 0; i < grid_size; ++i)
        grid.push_back(static_cast<double>(i) / static_cast<double>(grid_size - 1));
    auto insert_orbit = [&](double x) {
        // Repeated q_step so that Q(grid point) lands bit-exactly on the next
        // inserted point; capped, with the steady state as the tail anchor.
        for (int t = 0; t < 1000; ++t) {
            grid.push_back(x);
            if (std::abs(x - pi0) < 1e-15) break;
            x = q_step(ch, x);
        }
    };
    insert_orbit(ch.stay_high);
    insert_orbit(ch.low_to_high);
    for (double x : extra_points) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("extra grid point outside [0,1]");
        insert_orbit(x);
    }
    grid.push_back(pi0);
    grid.push_back(q_step(ch, ch.stay_high));
    grid.push_back(q_step(ch, ch.low_to_high));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const int n = static_cast<int>(grid.size());
    std::vector<double> rew(n), drift_w(n);
    std::vector<int> drift_lo(n);
    for (int i = 0; i < n; ++i) {
        rew[i] = prob.reward(grid[i]);
        const double q = q_step(ch, grid[i]);
        auto it = std::lower_bound(grid.begin(), grid.end(), q);
        if (it != grid.end() && *it == q) {
            drift_lo[i] = static_cast<int>(it - grid.begin());
            drift_w[i] = 0.0;
        } else if (it == grid.begin()) {
            drift_lo[i] = 0;
            drift_w[i] = 0.0;
        } else if (it == grid.end()) {
            drift_lo[i] = n - 1;
            drift_w[i] = 0.0;
        } else {
            const int hi = static_cast<int>(it - grid.begin());
            drift_lo[i] = hi - 1;
            drift_w[i] = (q - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
        }
    }
    int ip = 0, ir = 0;
    {
        auto find = [&](double x) {
            auto it = std::lower_bound(grid.begin(), grid.end(), x);
            return static_cast<int>(it - grid.begin());
        };
        ip = find(ch.stay_high);
        ir = find(ch.low_to_high);
    }

    std::vector<double> v(static_cast<size_t>(n), 0.0), nv(static_cast<size_t>(n), 0.0);
    const double stop = tol * (1.0 - b) / std::max(b, 1e-300);
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        const double vp = v[static_cast<size_t>(ip)];
        const double vr = v[static_cast<size_t>(ir)];
        double diff = 0.0;
        for (int i = 0; i < n; ++i) {
            const double drift_v = drift_w[i] == 0.0
                                       ? v[static_cast<size_t>(drift_lo[i])]
                                       : v[static_cast<size_t>(drift_lo[i])] * (1.0 - drift_w[i]) +
                                             v[static_cast<size_t>(drift_lo[i]) + 1] * drift_w[i];
            const double transmit = rew[i] + b * (grid[i] * vp + (1.0 - grid[i]) * vr);
            const double idle = w + b * drift_v;
            nv[static_cast<size_t>(i)] = std::max(transmit, idle);
            diff = std::max(diff, std::abs(nv[static_cast<size_t>(i)] - v[static_cast<size_t>(i)]));
        }
        v.swap(nv);
        if (diff <= stop) {
            ++sweep;
            break;
        }
    }
    if (sweep >= max_sweeps)
        throw std::runtime_error("value iteration did not converge within the sweep cap");
    return ValueTable(std::move(grid), std::move(v), sweep);
}

double transmit_value(const SubsidyProblem& prob, const ValueTable& table, Belief pi) {
    const double vp = table.values()[static_cast<size_t>(table.exact_index(prob.channel.stay_high))];
    const double vr =
        table.values()[static_cast<size_t>(table.exact_index(prob.channel.low_to_high))];
    return prob.reward(pi) + prob.discount * (pi * vp + (1.0 - pi) * vr);
}

double idle_value(const SubsidyProblem& prob, const ValueTable& table, Belief pi) {
    return prob.subsidy + prob.discount * table.at(q_step(prob.channel, pi));
}

ThresholdClass solve_threshold(const SubsidyProblem& prob) {
    if (!(prob.subsidy > prob.channel.low_rate && prob.subsidy < 1.0))
        throw std::invalid_argument("solve_threshold requires low_rate < subsidy < 1");
    const ValueTable table = value_iteration(prob);
    auto gap = [&](double pi) { return transmit_value(prob, table, pi) - idle_value(prob, table, pi); };
    double lo = 0.0, hi = 1.0;
    const double glo = gap(0.0);
    const double ghi = gap(1.0);
    if (!(glo < 0.0 && ghi > 0.0))
        throw std::logic_error("no transmit/idle sign change on [0,1]; expected for interior subsidy");
    for (int it = 0; it < 54; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return ThresholdClass::interior(0.5 * (lo + hi));
}

}  // namespace memsched
