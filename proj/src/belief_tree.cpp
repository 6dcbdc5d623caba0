#include "memsched/belief_tree.hpp"

#include <bit>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "memsched/whittle.hpp"

namespace memsched {
namespace {

constexpr int kOriginInitial = 0;
constexpr int kOriginHigh = 1;
constexpr int kOriginLow = 2;
constexpr int kMaxUsers = 8;
constexpr int kMaxHorizon = 62;  // age fits 6 bits

inline std::uint8_t pack_cell(int origin, int age) {
    return static_cast<std::uint8_t>((origin << 6) | age);
}
inline int cell_origin(std::uint8_t c) { return c >> 6; }
inline int cell_age(std::uint8_t c) { return c & 0x3f; }

}  // namespace

struct ExactEvaluator::Impl {
    DownlinkSystem sys;
    SystemState init;
    int cap;
    PolicyKind kind;
    int n;
    double beta;

    // Per user, indexed [origin][age]: belief, immediate reward, Whittle
    // index (policy kinds that need it), and the canonical cell for states
    // whose beliefs coincide bit-exactly (collapses i.i.d. channels).
    std::vector<std::vector<double>> belief_tab;
    std::vector<std::vector<double>> reward_tab;
    std::vector<std::vector<double>> windex_tab;
    std::vector<std::vector<std::uint8_t>> canon_tab;

    struct Layer {
        std::vector<std::uint64_t> states;
        std::vector<std::uint32_t> children;  // per state: 2 per expanded action
        std::vector<std::uint8_t> actions;    // policy kinds only
        std::unordered_map<std::uint64_t, std::uint32_t> lookup;  // freed once frozen
    };
    std::vector<Layer> layers;
    int expanded_depth = 0;  // layers [0, expanded_depth) have children

    std::vector<double> nofb_values;  // prefix values for the no-feedback rule

    Impl(const DownlinkSystem& s, SystemState initial, int horizon_cap, PolicyKind k)
        : sys(s), init(std::move(initial)), cap(horizon_cap), kind(k), n(s.size()),
          beta(s.discount()) {
        if (n > kMaxUsers)
            throw std::invalid_argument("exact evaluation supports at most 8 users");
        if (cap < 1 || cap > kMaxHorizon)
            throw std::invalid_argument("horizon cap must be in [1, 62]");
        if (static_cast<int>(init.size()) != n)
            throw std::invalid_argument("initial belief vector length mismatch");
        for (double b : init)
            if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("belief outside [0,1]");
        build_tables();
        if (kind == PolicyKind::no_feedback) {
            build_nofb_values();
        } else {
            layers.resize(static_cast<size_t>(cap) + 1);
            std::uint64_t root = 0;
            for (int u = 0; u < n; ++u)
                root |= static_cast<std::uint64_t>(canon(u, kOriginInitial, 0)) << (8 * u);
            layers[0].states.push_back(root);
            layers[0].lookup.emplace(root, 0);
        }
    }

    int stride() const { return cap + 1; }
    double belief(int u, int origin, int age) const {
        return belief_tab[static_cast<size_t>(u)][static_cast<size_t>(origin * stride() + age)];
    }
    double reward(int u, int origin, int age) const {
        return reward_tab[static_cast<size_t>(u)][static_cast<size_t>(origin * stride() + age)];
    }
    double windex(int u, int origin, int age) const {
        return windex_tab[static_cast<size_t>(u)][static_cast<size_t>(origin * stride() + age)];
    }
    std::uint8_t canon(int u, int origin, int age) const {
        return canon_tab[static_cast<size_t>(u)][static_cast<size_t>(origin * stride() + age)];
    }

    void build_tables() {
        belief_tab.resize(static_cast<size_t>(n));
        reward_tab.resize(static_cast<size_t>(n));
        canon_tab.resize(static_cast<size_t>(n));
        const bool want_windex = kind == PolicyKind::whittle;
        if (want_windex) windex_tab.resize(static_cast<size_t>(n));
        for (int u = 0; u < n; ++u) {
            const auto& user = sys.users()[static_cast<size_t>(u)];
            auto& beliefs = belief_tab[static_cast<size_t>(u)];
            auto& rewards = reward_tab[static_cast<size_t>(u)];
            auto& canons = canon_tab[static_cast<size_t>(u)];
            beliefs.resize(static_cast<size_t>(3 * stride()));
            rewards.resize(static_cast<size_t>(3 * stride()));
            canons.resize(static_cast<size_t>(3 * stride()));
            if (want_windex) windex_tab[static_cast<size_t>(u)].resize(static_cast<size_t>(3 * stride()));
            std::map<std::uint64_t, std::uint8_t> seen;
            for (int origin = 0; origin < 3; ++origin) {
                const double base = origin == kOriginInitial ? init[static_cast<size_t>(u)]
                                    : origin == kOriginHigh  ? user.channel.stay_high
                                                             : user.channel.low_to_high;
                for (int age = 0; age <= cap; ++age) {
                    const size_t at = static_cast<size_t>(origin * stride() + age);
                    const double b = q_iterate(user.channel, base, age);
                    beliefs[at] = b;
                    rewards[at] = user.reward(b);
                    if (want_windex)
                        windex_tab[static_cast<size_t>(u)][at] =
                            whittle_index(user.channel, user.reward, beta, b);
                    const auto ins = seen.emplace(std::bit_cast<std::uint64_t>(b),
                                                  pack_cell(origin, age));
                    canons[at] = ins.first->second;
                }
            }
        }
    }

    void build_nofb_values() {
        nofb_values.assign(static_cast<size_t>(cap) + 1, 0.0);
        double acc = 0.0;
        double disc = 1.0;
        for (int t = 0; t < cap; ++t) {
            double best = reward(0, kOriginInitial, t);
            for (int u = 1; u < n; ++u) best = std::max(best, reward(u, kOriginInitial, t));
            acc += disc * best;
            disc *= beta;
            nofb_values[static_cast<size_t>(t) + 1] = acc;
        }
    }

    std::uint64_t child_state(std::uint64_t state, int scheduled, bool high) const {
        std::uint64_t next = 0;
        for (int u = 0; u < n; ++u) {
            const auto cell = static_cast<std::uint8_t>(state >> (8 * u));
            std::uint8_t nc;
            if (u == scheduled) {
                nc = canon(u, high ? kOriginHigh : kOriginLow, 0);
            } else {
                nc = canon(u, cell_origin(cell), cell_age(cell) + 1);
            }
            next |= static_cast<std::uint64_t>(nc) << (8 * u);
        }
        return next;
    }

    int decide(std::uint64_t state) const {
        int best = 0;
        double best_score = -1.0;
        for (int u = 0; u < n; ++u) {
            const auto cell = static_cast<std::uint8_t>(state >> (8 * u));
            const int o = cell_origin(cell);
            const int a = cell_age(cell);
            const double s = kind == PolicyKind::whittle ? windex(u, o, a) : belief(u, o, a);
            if (s > best_score) {
                best_score = s;
                best = u;
            }
        }
        return best;
    }

    void expand_layer(int d) {
        Layer& cur = layers[static_cast<size_t>(d)];
        Layer& nxt = layers[static_cast<size_t>(d) + 1];
        const bool all_actions =
            kind == PolicyKind::optimal || kind == PolicyKind::random_uniform;
        const int branch = all_actions ? n : 1;
        cur.children.resize(cur.states.size() * static_cast<size_t>(2 * branch));
        if (!all_actions) cur.actions.resize(cur.states.size());
        nxt.lookup.reserve(cur.states.size() * 2);
        auto intern = [&](std::uint64_t s) -> std::uint32_t {
            const auto ins =
                nxt.lookup.emplace(s, static_cast<std::uint32_t>(nxt.states.size()));
            if (ins.second) nxt.states.push_back(s);
            return ins.first->second;
        };
        for (size_t i = 0; i < cur.states.size(); ++i) {
            const std::uint64_t s = cur.states[i];
            if (all_actions) {
                for (int act = 0; act < n; ++act) {
                    cur.children[i * static_cast<size_t>(2 * branch) + static_cast<size_t>(2 * act)] =
                        intern(child_state(s, act, true));
                    cur.children[i * static_cast<size_t>(2 * branch) + static_cast<size_t>(2 * act) + 1] =
                        intern(child_state(s, act, false));
                }
            } else {
                const int act = decide(s);
                cur.actions[i] = static_cast<std::uint8_t>(act);
                cur.children[i * 2] = intern(child_state(s, act, true));
                cur.children[i * 2 + 1] = intern(child_state(s, act, false));
            }
        }
        cur.lookup = {};  // frozen; drop the hash memory
    }

    void ensure_depth(int depth) {
        while (expanded_depth < depth) {
            expand_layer(expanded_depth);
            ++expanded_depth;
        }
    }

    // Backward pass for one horizon; optionally reports the root argmax.
    double horizon_value(int m, int* root_action) {
        if (kind == PolicyKind::no_feedback) {
            if (root_action) {
                int best = 0;
                double best_score = reward(0, kOriginInitial, 0);
                for (int u = 1; u < n; ++u)
                    if (reward(u, kOriginInitial, 0) > best_score) {
                        best_score = reward(u, kOriginInitial, 0);
                        best = u;
                    }
                *root_action = best;
            }
            return nofb_values[static_cast<size_t>(m)];
        }
        ensure_depth(m);
        const bool all_actions =
            kind == PolicyKind::optimal || kind == PolicyKind::random_uniform;
        const int branch = all_actions ? n : 1;
        std::vector<double> next(layers[static_cast<size_t>(m)].states.size(), 0.0);
        std::vector<double> cur;
        for (int d = m - 1; d >= 0; --d) {
            const Layer& layer = layers[static_cast<size_t>(d)];
            cur.assign(layer.states.size(), 0.0);
            for (size_t i = 0; i < layer.states.size(); ++i) {
                const std::uint64_t s = layer.states[i];
                const size_t row = i * static_cast<size_t>(2 * branch);
                if (all_actions) {
                    double best = -1.0;
                    double sum = 0.0;
                    int best_act = 0;
                    for (int act = 0; act < n; ++act) {
                        const auto cell = static_cast<std::uint8_t>(s >> (8 * act));
                        const double pi = belief(act, cell_origin(cell), cell_age(cell));
                        const double q =
                            reward(act, cell_origin(cell), cell_age(cell)) +
                            beta * (pi * next[layer.children[row + static_cast<size_t>(2 * act)]] +
                                    (1.0 - pi) *
                                        next[layer.children[row + static_cast<size_t>(2 * act) + 1]]);
                        sum += q;
                        if (q > best) {
                            best = q;
                            best_act = act;
                        }
                    }
                    cur[i] = kind == PolicyKind::optimal ? best : sum / n;
                    if (d == 0 && i == 0 && root_action) *root_action = best_act;
                } else {
                    const int act = layer.actions[i];
                    const auto cell = static_cast<std::uint8_t>(s >> (8 * act));
                    const double pi = belief(act, cell_origin(cell), cell_age(cell));
                    cur[i] = reward(act, cell_origin(cell), cell_age(cell)) +
                             beta * (pi * next[layer.children[row]] +
                                     (1.0 - pi) * next[layer.children[row + 1]]);
                    if (d == 0 && i == 0 && root_action) *root_action = act;
                }
            }
            cur.swap(next);
        }
        return next.empty() ? 0.0 : next[0];
    }
};

ExactEvaluator::ExactEvaluator(const DownlinkSystem& sys, SystemState initial, int horizon_cap,
                               PolicyKind kind)
    : impl_(std::make_unique<Impl>(sys, std::move(initial), horizon_cap, kind)) {}

ExactEvaluator::~ExactEvaluator() = default;
ExactEvaluator::ExactEvaluator(ExactEvaluator&&) noexcept = default;
ExactEvaluator& ExactEvaluator::operator=(ExactEvaluator&&) noexcept = default;

double ExactEvaluator::value_at_horizon(int horizon) {
    if (horizon < 0 || horizon > impl_->cap)
        throw std::invalid_argument("horizon outside [0, cap]");
    if (horizon == 0) return 0.0;
    return impl_->horizon_value(horizon, nullptr);
}

int ExactEvaluator::first_action(int horizon) {
    if (horizon < 1 || horizon > impl_->cap)
        throw std::invalid_argument("horizon outside [1, cap]");
    int action = 0;
    impl_->horizon_value(horizon, &action);
    return action;
}

}  // namespace memsched
