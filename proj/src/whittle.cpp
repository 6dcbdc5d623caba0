#include "memsched/whittle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memsched {
namespace {

// Exact all-active anchors (same 2x2 system as the subsidy module; duplicated
// here in subsidy-free form since the index solves for the subsidy).
void all_active_anchors(const MarkovChannel& ch, const RewardModel& reward, double b, double* vp,
                        double* vr) {
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    const double rp = reward(p);
    const double rr = reward(r);
    const double den = (1.0 - b) * (1.0 + b * r - b * p);
    *vp = ((1.0 - b * (1.0 - r)) * rp + b * (1.0 - p) * rr) / den;
    *vr = ((1.0 - b * p) * rr + b * r * rp) / den;
}

}  // namespace

IndexBranch index_branch(const MarkovChannel& ch, Belief pi) {
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    if (ch.positively_correlated()) {
        if (pi >= p) return IndexBranch::pos_high;
        if (pi >= steady_state(ch)) return IndexBranch::pos_mid;
        if (pi >= r) return IndexBranch::pos_low_mid;
        return IndexBranch::pos_low;
    }
    if (pi >= r) return IndexBranch::neg_high;
    if (pi >= q_step(ch, p)) return IndexBranch::neg_upper;
    if (pi >= steady_state(ch)) return IndexBranch::neg_mid;
    if (pi >= p) return IndexBranch::neg_low_mid;
    return IndexBranch::neg_low;
}

double whittle_index(const MarkovChannel& ch, const RewardModel& reward, double discount,
                     Belief pi) {
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    const double b = discount;
    const double q = q_step(ch, pi);
    // Coefficients of the indifference equation
    //   W = R(pi) - b R(Q(pi)) + c1 V_W(p) + c0 V_W(r)
    // where the idle-branch value at Q(pi) has been expanded when active.
    const double c1 = b * (pi - b * q);
    const double c0 = b * ((1.0 - pi) - b * (1.0 - q));

    switch (index_branch(ch, pi)) {
        case IndexBranch::pos_high:
        case IndexBranch::neg_high:
            // Everything reachable idles at the tie point: W = R(pi).
            return reward(pi);

        case IndexBranch::pos_mid: {
            // stay_high active; low_to_high and Q(pi) idle forever.
            return ((1.0 - b * p) * reward(pi) + b * pi * reward(p)) / (1.0 - b * p + b * pi);
        }

        case IndexBranch::pos_low_mid: {
            // low_to_high idles for L = L(low_to_high, pi) slots, then
            // transmits; stay_high and Q(pi) active. V(r) = (A w + B) / D and
            // V(p) = (R(p) + b(1-p) V(r)) / (1 - b p); solve the indifference
            // equation, linear in the subsidy.
            const auto hit = hitting_time(ch, r, pi);
            if (!hit) throw std::logic_error("finite hitting time expected below steady state");
            const double bL = pow_int(b, *hit);
            const double qq = q_iterate(ch, r, *hit);
            const double A = (1.0 - bL) * (1.0 - b * p);
            const double B =
                (1.0 - b) * bL * ((1.0 - b * p) * reward(qq) + b * qq * reward(p));
            const double D = (1.0 - b) * (1.0 - b * p) * (1.0 - bL * b) +
                             (1.0 - b) * (1.0 - b) * qq * bL * b;
            const double F = c1 * b * (1.0 - p) / (1.0 - b * p) + c0;
            const double G = reward(pi) - b * reward(q) + c1 * reward(p) / (1.0 - b * p);
            return (G * D + F * B) / (D - F * A);
        }

        case IndexBranch::pos_low:
        case IndexBranch::neg_low: {
            // All reachable beliefs stay active.
            double vp = 0.0, vr = 0.0;
            all_active_anchors(ch, reward, b, &vp, &vr);
            return reward(pi) - b * reward(q) + c1 * vp + c0 * vr;
        }

        case IndexBranch::neg_upper: {
            // low_to_high active; stay_high and Q(pi) idle forever.
            const double num =
                (1.0 - b) * ((1.0 - b * (1.0 - r)) * reward(pi) + b * (1.0 - pi) * reward(r));
            const double den =
                (1.0 - b * pi) * (1.0 - b * (1.0 - r)) - b * b * (1.0 - pi) * r;
            return num / den;
        }

        case IndexBranch::neg_mid:
        case IndexBranch::neg_low_mid: {
            // stay_high idles one slot then transmits at Q(stay_high);
            // low_to_high active. V(p) = (ap w + bp) / D, V(r) = (ar w + br) / D.
            const double qp = q_step(ch, p);
            const double rq = reward(qp);
            const double rr = reward(r);
            const double D =
                (1.0 - b * (1.0 - r)) * (1.0 - b * b * qp) - b * b * b * r * (1.0 - qp);
            const double ap = 1.0 - b * (1.0 - r);
            const double bp = b * (1.0 - b * (1.0 - r)) * rq + b * b * (1.0 - qp) * rr;
            const double ar = b * r;
            const double br = b * b * r * rq + (1.0 - b * b * qp) * rr;
            if (index_branch(ch, pi) == IndexBranch::neg_mid) {
                // Q(pi) idles forever: W (1 + b/(1-b)) = R(pi) + b pi V(p)
                // + b (1-pi) V(r) - b w/(1-b), i.e. replace c1, c0 by the
                // one-step transmit coefficients.
                const double num = (1.0 - b) * reward(pi) * D + b * (1.0 - b) * pi * bp +
                                   b * (1.0 - b) * (1.0 - pi) * br;
                const double den = D - b * (1.0 - b) * pi * ap - (1.0 - b) * b * (1.0 - pi) * ar;
                return num / den;
            }
            // neg_low_mid: Q(pi) is active.
            const double num = (reward(pi) - b * reward(q)) * D + c1 * bp + c0 * br;
            const double den = D - c1 * ap - c0 * ar;
            return num / den;
        }
    }
    throw std::logic_error("unreachable index branch");
}

double whittle_index_oracle(const MarkovChannel& ch, const RewardModel& reward, double discount,
                            Belief pi, double tol) {
    const double lo_rate = ch.low_rate;
    std::vector<Belief> extra{pi};
    auto idle_minus_transmit = [&](double subsidy) {
        const SubsidyProblem prob =
            SubsidyProblem::validated(ch, reward, discount, subsidy);
        const ValueTable table = value_iteration(prob, 1001, 200000, 1e-9, extra);
        return idle_value(prob, table, pi) - transmit_value(prob, table, pi);
    };
    double lo = lo_rate;
    double hi = 1.0;
    if (idle_minus_transmit(lo) >= 0.0) return lo;  // idling already optimal at the floor
    if (idle_minus_transmit(hi) <= 0.0) return hi;  // transmitting optimal even at the cap
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (idle_minus_transmit(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

IndexabilityScan indexability_scan(const MarkovChannel& ch, const RewardModel& reward,
                                   double discount, std::span<const double> subsidy_grid,
                                   double tol) {
    for (size_t i = 1; i < subsidy_grid.size(); ++i)
        if (!(subsidy_grid[i] > subsidy_grid[i - 1]))
            throw std::invalid_argument("subsidy grid must be strictly increasing");
    IndexabilityScan scan;
    scan.points.reserve(subsidy_grid.size());
    double prev = -1.0;
    bool have_prev = false;
    for (size_t i = 0; i < subsidy_grid.size(); ++i) {
        const double w = subsidy_grid[i];
        if (w >= 1.0) throw std::invalid_argument("subsidy grid must stay below 1");
        const SubsidyProblem prob = SubsidyProblem::validated(ch, reward, discount, w);
        const ThresholdClass cls = classify_threshold(prob);
        scan.points.push_back({w, cls});
        if (cls.kind != ThresholdClass::Kind::interior) continue;  // always-active region
        if (have_prev && !(cls.threshold - prev > tol) && scan.violation_at < 0) {
            scan.strictly_increasing = false;
            scan.violation_at = static_cast<int>(i);
        }
        prev = cls.threshold;
        have_prev = true;
    }
    return scan;
}

std::vector<std::pair<long, double>> index_trace(const MarkovChannel& ch,
                                                 const RewardModel& reward, double discount,
                                                 Belief pi0, int horizon) {
    if (horizon < 1) throw std::invalid_argument("trace horizon must be >= 1");
    std::vector<std::pair<long, double>> out;
    out.reserve(static_cast<size_t>(horizon) + 1);
    double x = pi0;
    for (long t = 0; t <= horizon; ++t) {
        out.emplace_back(t, whittle_index(ch, reward, discount, x));
        x = q_step(ch, x);
    }
    return out;
}

}  // namespace memsched
