// Finite-horizon mean-equicontinuity diagnostic: search for disjoint blocks
// of total mass > 1 - eps whose within-block Hamming diameter stays below
// eps in every tested window. Construction: greedy cover by joint balls of
// radius eps/2 around realized cells (so the diameter bound holds in every
// window by the triangle inequality), capped at the covering-number target.
// On failure the report carries the ball-mass certificate: any family of
// fewer than min_family_cardinality blocks that covers mass > 1 - eps must
// put two points at Hamming distance >= eps in some window into one block.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/covering.hpp"
#include "pcx/dynamics.hpp"
#include "pcx/name_table.hpp"

namespace pcx {

struct BlockFamilyReport {
    bool success = false;
    std::size_t attempted_cardinality = 0;  // cap derived from the eps/2 covering numbers
    std::vector<std::vector<std::size_t>> blocks;  // cell indices per block
    Rat covered_mass;
    Rat max_within_block_hamming;  // sup over windows and within-block pairs

    // failure certificate (ball-mass bound)
    Rat max_joint_ball_mass;            // M*: largest mass of a joint eps-ball
    std::size_t min_family_cardinality = 0;  // any valid family needs at least this many blocks
    std::size_t witness_u = 0, witness_v = 0;
    std::size_t witness_window = 0;
    Rat witness_hamming;
};

namespace detail {

struct JointTable {
    NameTable table;
    std::vector<std::vector<std::size_t>> window_coords;  // per window: coordinate indices
};

inline JointTable build_joint_table(const Partition& alpha, const SystemAction& sys,
                                    const std::vector<std::vector<GroupElement>>& windows) {
    JointTable jt;
    std::map<GroupElement, std::size_t> seen;
    std::vector<GroupElement> distinct;
    jt.window_coords.resize(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        for (const auto& g : windows[w]) {
            auto [it, fresh] = seen.try_emplace(g, distinct.size());
            if (fresh) distinct.push_back(g);
            jt.window_coords[w].push_back(it->second);
        }
    }
    jt.table = build_name_table_cells(orbit_partitions(alpha, sys, distinct));
    return jt;
}

}  // namespace detail

inline BlockFamilyReport mean_equicontinuity_diagnostic(
    const Partition& alpha, const SystemAction& sys,
    const std::vector<std::vector<GroupElement>>& windows, const Rat& eps) {
    if (windows.empty())
        throw std::invalid_argument("mean_equicontinuity_diagnostic: no windows");
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("mean_equicontinuity_diagnostic: eps in (0,1)");

    detail::JointTable jt = detail::build_joint_table(alpha, sys, windows);
    const NameTable& table = jt.table;
    const std::size_t n = table.cell_count;

    // Per-window diff-count radii for the two relevant scales.
    const Rat eps_half = eps / 2;
    std::vector<int> k_half(windows.size()), k_full(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        k_half[w] = detail::hamming_radius_count(eps_half, jt.window_coords[w].size());
        k_full[w] = detail::hamming_radius_count(eps, jt.window_coords[w].size());
    }

    // Cap: the largest per-window greedy covering number at radius eps/2.
    std::size_t cap = 1;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        NameTable sub = project_table(table, jt.window_coords[w]);
        cap = std::max(cap, covering_number(sub, eps_half, CoverSolver::Greedy).cover_size);
    }

    // Pairwise joint-closeness at both radii, as bit rows.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> close_half(n * words, 0), close_full(n * words, 0);
    auto set_bit = [&](std::vector<std::uint64_t>& rows, std::size_t u, std::size_t v) {
        rows[u * words + v / 64] |= std::uint64_t{1} << (v % 64);
    };
    // fast path: every window's coordinates are a prefix of the longest
    std::size_t longest = 0;
    for (std::size_t w = 0; w < windows.size(); ++w)
        if (jt.window_coords[w].size() > jt.window_coords[longest].size()) longest = w;
    bool nested = true;
    for (std::size_t w = 0; w < windows.size() && nested; ++w)
        for (std::size_t i = 0; i < jt.window_coords[w].size() && nested; ++i)
            nested = jt.window_coords[w][i] == jt.window_coords[longest][i];

    std::vector<int> cum(table.num_partitions + 1, 0);
    for (std::size_t u = 0; u < n; ++u) {
        set_bit(close_half, u, u);
        set_bit(close_full, u, u);
        const std::uint8_t* nu = table.name(u);
        for (std::size_t v = u + 1; v < n; ++v) {
            const std::uint8_t* nv = table.name(v);
            bool half_ok = true, full_ok = true;
            if (nested) {
                const auto& coords = jt.window_coords[longest];
                int acc = 0;
                cum[0] = 0;
                for (std::size_t i = 0; i < coords.size(); ++i) {
                    acc += (nu[coords[i]] != nv[coords[i]]);
                    cum[i + 1] = acc;
                }
                for (std::size_t w = 0; w < windows.size() && full_ok; ++w) {
                    int d = cum[jt.window_coords[w].size()];
                    if (d > k_half[w]) half_ok = false;
                    if (d > k_full[w]) full_ok = false;
                }
            } else {
                for (std::size_t w = 0; w < windows.size() && full_ok; ++w) {
                    int d = 0;
                    for (std::size_t c : jt.window_coords[w]) d += (nu[c] != nv[c]);
                    if (d > k_half[w]) half_ok = false;
                    if (d > k_full[w]) full_ok = false;
                }
            }
            if (half_ok) {
                set_bit(close_half, u, v);
                set_bit(close_half, v, u);
            }
            if (full_ok) {
                set_bit(close_full, u, v);
                set_bit(close_full, v, u);
            }
        }
    }

    const Rat threshold = Rat(1) - eps;
    BlockFamilyReport rep;
    rep.attempted_cardinality = cap;

    // Greedy joint cover by eps/2-balls, disjointified as selected.
    std::vector<std::uint64_t> covered(words, 0);
    auto fresh_gain = [&](std::size_t c) {
        Rat g(0);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = close_half[c * words + w] & ~covered[w];
            while (bits) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                g += table.weights[w * 64 + b];
                bits &= bits - 1;
            }
        }
        return g;
    };
    Rat covered_mass(0);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<bool> used(n, false);
    while (covered_mass <= threshold && blocks.size() <= cap) {
        // plain greedy: small candidate counts here, no lazy heap needed
        std::size_t best_c = n;
        Rat best_g(-1);
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            Rat g = fresh_gain(c);
            if (g > best_g) {
                best_g = g;
                best_c = c;
            }
        }
        if (best_c == n || best_g == 0) break;
        used[best_c] = true;
        std::vector<std::size_t> block;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = close_half[best_c * words + w] & ~covered[w];
            covered[w] |= bits;
            while (bits) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                block.push_back(w * 64 + b);
                bits &= bits - 1;
            }
        }
        covered_mass += best_g;
        blocks.push_back(std::move(block));
    }

    if (covered_mass > threshold && blocks.size() <= cap) {
        rep.success = true;
        rep.blocks = std::move(blocks);
        rep.covered_mass = covered_mass;
        // exact within-block diameter, and the contract check
        Rat max_h(0);
        for (const auto& block : rep.blocks) {
            for (std::size_t i = 0; i < block.size(); ++i) {
                for (std::size_t j = i + 1; j < block.size(); ++j) {
                    for (std::size_t w = 0; w < windows.size(); ++w) {
                        int d = 0;
                        for (std::size_t c : jt.window_coords[w])
                            d += (table.name(block[i])[c] != table.name(block[j])[c]);
                        Rat h(d, static_cast<long>(jt.window_coords[w].size()));
                        h.canonicalize();
                        if (h > max_h) max_h = h;
                    }
                }
            }
        }
        rep.max_within_block_hamming = max_h;
        if (!(max_h < eps))
            throw postcondition_error("block family: within-block diameter reached eps");
        return rep;
    }

    // Failure: ball-mass certificate.
    rep.success = false;
    rep.covered_mass = covered_mass;
    Rat best_ball(0);
    for (std::size_t c = 0; c < n; ++c) {
        Rat g(0);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = close_full[c * words + w];
            while (bits) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                g += table.weights[w * 64 + b];
                bits &= bits - 1;
            }
        }
        if (g > best_ball) best_ball = g;
    }
    rep.max_joint_ball_mass = best_ball;
    // smallest k with k * M* > 1 - eps
    Rat ratio = threshold / best_ball;
    mpz_class fl = ratio.get_num() / ratio.get_den();
    rep.min_family_cardinality = static_cast<std::size_t>(fl.get_ui()) + 1;

    // witness far pair: heaviest pair that is not jointly eps-close
    Rat best_pair(-1);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            bool close = (close_full[u * words + v / 64] >> (v % 64)) & 1;
            if (close) continue;
            Rat score = table.weights[u] + table.weights[v];
            if (score > best_pair) {
                best_pair = score;
                rep.witness_u = u;
                rep.witness_v = v;
            }
        }
    }
    if (best_pair >= 0) {
        for (std::size_t w = 0; w < windows.size(); ++w) {
            int d = 0;
            for (std::size_t c : jt.window_coords[w])
                d += (table.name(rep.witness_u)[c] != table.name(rep.witness_v)[c]);
            if (d > k_full[w]) {
                rep.witness_window = w;
                Rat h(d, static_cast<long>(jt.window_coords[w].size()));
                h.canonicalize();
                rep.witness_hamming = h;
                break;
            }
        }
    }
    return rep;
}

}  // namespace pcx
