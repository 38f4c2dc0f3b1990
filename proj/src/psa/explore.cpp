#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "rtpta/psa.hpp"

namespace rtpta::psa {

namespace {

struct KeyHash {
    std::size_t operator()(const std::pair<std::vector<std::uint32_t>, DiscreteValuation> &k) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (auto v : k.first) {
            h = (h ^ v) * 0x100000001b3ull;
        }
        for (auto v : k.second) {
            h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
        }
        return h;
    }
};

}  // namespace

Exploration bounded_explore(const PsaNetwork &net, const Polyhedron &k, const ExploreOptions &opts) {
    Exploration ex;
    std::unordered_map<std::pair<std::vector<std::uint32_t>, DiscreteValuation>, std::vector<std::size_t>, KeyHash>
        by_key;
    auto add = [&](SymbolicState s, std::size_t depth) {
        std::size_t idx = ex.states.size();
        by_key[{s.locations, s.discretes}].push_back(idx);
        ex.states.push_back(std::move(s));
        ex.depth_of.push_back(depth);
        ex.has_successor.push_back(0);
        return idx;
    };

    SymbolicState init = net.initial_state(k);
    if (opts.on_state && !opts.on_state(init)) {
        ex.aborted = true;
        add(std::move(init), 0);
        return ex;
    }
    add(std::move(init), 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        if (net.in_bad_location(ex.states[cur])) {
            ex.reached_bad = true;
            if (opts.stop_at_bad) {
                return ex;
            }
            continue;
        }
        const std::size_t depth = ex.depth_of[cur];
        for (const auto &combo : net.enabled_syncs(ex.states[cur])) {
            auto next = net.successor(ex.states[cur], combo);
            if (!next) {
                continue;
            }
            if (depth >= opts.depth) {
                ex.depth_exceeded = true;
                break;
            }
            ++ex.generated;
            ex.has_successor[cur] = 1;
            if (opts.on_state && !opts.on_state(*next)) {
                ex.aborted = true;
                return ex;
            }
            std::optional<std::size_t> target;
            if (auto it = by_key.find({next->locations, next->discretes}); it != by_key.end()) {
                for (std::size_t j : it->second) {
                    if (ex.states[j].zone.includes(next->zone)) {
                        target = j;
                        break;
                    }
                }
            }
            if (!target) {
                target = add(std::move(*next), depth + 1);
                queue.push_back(*target);
            } else if (opts.keep_merged) {
                ex.merged.push_back(std::move(*next));
            }
            if (opts.record_edges) {
                ex.edges.push_back(Edge{cur, combo.label, *target, combo.moves});
            }
        }
    }
    return ex;
}

std::vector<std::vector<std::size_t>> maximal_paths(const Exploration &ex, std::size_t limit) {
    std::vector<std::vector<std::size_t>> out_edges(ex.states.size());
    for (std::size_t e = 0; e < ex.edges.size(); ++e) {
        out_edges[ex.edges[e].from].push_back(e);
    }
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> path;
    std::vector<char> on_stack(ex.states.size(), 0);
    // iterative DFS: (state, next edge position)
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    on_stack[0] = 1;
    while (!stack.empty()) {
        auto &[s, pos] = stack.back();
        if (out_edges[s].empty()) {
            paths.push_back(path);
            if (paths.size() > limit) {
                throw std::runtime_error("too many maximal paths");
            }
        }
        if (pos < out_edges[s].size()) {
            std::size_t e = out_edges[s][pos++];
            std::size_t t = ex.edges[e].to;
            if (on_stack[t]) {
                throw std::runtime_error("state graph has a cycle; maximal paths are infinite");
            }
            on_stack[t] = 1;
            path.push_back(e);
            stack.emplace_back(t, 0);
            continue;
        }
        on_stack[s] = 0;
        stack.pop_back();
        if (!path.empty()) {
            path.pop_back();
        }
    }
    return paths;
}

}  // namespace rtpta::psa
