// Name tables: the realized joint-name vectors of a finite list of
// partitions, with exact cell weights. A cell is a join atom together with
// the per-partition atom indices that cut it out; the normalized Hamming
// distance between points depends only on their cells, so the table is the
// exact combinatorial reduction of the covering problems.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/measure_space.hpp"
#include "pcx/partition.hpp"

namespace pcx {

struct NameTable {
    std::size_t num_partitions = 0;
    std::vector<int> atom_counts;
    std::size_t cell_count = 0;
    std::vector<std::uint8_t> names;  // cell-major, cell_count x num_partitions, lex-sorted
    std::vector<Rat> weights;
    Rat total_weight;

    const std::uint8_t* name(std::size_t cell) const {
        return names.data() + cell * num_partitions;
    }
};

// Index of the atom of alpha containing p (first hit; -1 if none, which can
// only happen for sampled points on atom boundaries).
inline int atom_index(const Partition& alpha, const Point& p) {
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (contains(alpha.atoms[i], p)) return static_cast<int>(i);
    return -1;
}

// Exact cell enumeration by sequential refinement. Weights are the exact
// measures of the join atoms; zero-measure cells are dropped.
inline NameTable build_name_table_cells(const std::vector<Partition>& family) {
    if (family.empty()) throw std::invalid_argument("name table: empty partition list");
    const SpacePtr& space = family.front().space;
    NameTable table;
    table.num_partitions = family.size();
    for (const auto& p : family) {
        if (p.space.get() != space.get())
            throw std::invalid_argument("name table: partitions on different spaces");
        if (p.size() > 255) throw capacity_error("name table: more than 255 atoms per partition");
        table.atom_counts.push_back(static_cast<int>(p.size()));
    }

    struct Cell {
        std::vector<std::uint8_t> name;
        MeasurableSet set;
        Rat weight;
    };
    std::vector<Cell> cells{{{}, MeasurableSet::full_like(*space), Rat(1)}};
    for (const auto& part : family) {
        std::vector<Cell> next;
        next.reserve(cells.size() * 2);
        for (const auto& cell : cells) {
            for (std::size_t i = 0; i < part.size(); ++i) {
                MeasurableSet piece = set_intersection(cell.set, part.atoms[i]);
                Rat w = measure(*space, piece);
                if (w == 0) continue;
                Cell c{cell.name, std::move(piece), std::move(w)};
                c.name.push_back(static_cast<std::uint8_t>(i));
                next.push_back(std::move(c));
            }
        }
        cells = std::move(next);
        if (cells.size() > kMaxCells)
            throw capacity_error("name table exceeds the cell cap; consider sample mode");
    }

    table.cell_count = cells.size();
    table.names.reserve(cells.size() * table.num_partitions);
    table.total_weight = Rat(0);
    for (auto& c : cells) {
        table.names.insert(table.names.end(), c.name.begin(), c.name.end());
        table.total_weight += c.weight;
        table.weights.push_back(std::move(c.weight));
    }
    return table;
}

// Empirical cells from sampled points; each sample contributes weight 1/n.
// Points falling on representation boundaries (no atom hit) are dropped from
// the table but still counted in the denominator.
inline NameTable build_name_table_samples(const std::vector<Partition>& family, std::size_t n,
                                          std::uint64_t seed) {
    if (family.empty()) throw std::invalid_argument("name table: empty partition list");
    const SpacePtr& space = family.front().space;
    NameTable table;
    table.num_partitions = family.size();
    for (const auto& p : family) {
        if (p.size() > 255) throw capacity_error("name table: more than 255 atoms per partition");
        table.atom_counts.push_back(static_cast<int>(p.size()));
    }
    auto points = sample_points(*space, n, seed);
    std::map<std::vector<std::uint8_t>, std::size_t> counts;
    for (const auto& pt : points) {
        std::vector<std::uint8_t> name;
        name.reserve(family.size());
        bool ok = true;
        for (const auto& part : family) {
            int idx = atom_index(part, pt);
            if (idx < 0) { ok = false; break; }
            name.push_back(static_cast<std::uint8_t>(idx));
        }
        if (ok) ++counts[name];
    }
    table.cell_count = counts.size();
    table.total_weight = Rat(0);
    for (const auto& [name, cnt] : counts) {
        table.names.insert(table.names.end(), name.begin(), name.end());
        Rat w(static_cast<long>(cnt), static_cast<long>(n));
        w.canonicalize();
        table.total_weight += w;
        table.weights.push_back(std::move(w));
    }
    if (table.cell_count > kMaxCells) throw capacity_error("sampled name table exceeds cell cap");
    return table;
}

// Number of coordinates where the two cells' names differ.
inline int hamming_count(const NameTable& table, std::size_t u, std::size_t v) {
    const std::uint8_t* a = table.name(u);
    const std::uint8_t* b = table.name(v);
    int diff = 0;
    for (std::size_t i = 0; i < table.num_partitions; ++i) diff += (a[i] != b[i]);
    return diff;
}

// Normalized Hamming distance as an exact rational in [0,1].
inline Rat hamming_distance(const NameTable& table, const std::vector<std::uint8_t>& u,
                            const std::vector<std::uint8_t>& v) {
    if (u.size() != table.num_partitions || v.size() != table.num_partitions)
        throw std::invalid_argument("hamming_distance: name length mismatch");
    int diff = 0;
    for (std::size_t i = 0; i < u.size(); ++i) diff += (u[i] != v[i]);
    Rat d(diff, static_cast<long>(table.num_partitions));
    d.canonicalize();
    return d;
}

// Restriction of the table to a subset of coordinates; cells that collide
// after projection merge and their weights add.
inline NameTable project_table(const NameTable& table, const std::vector<std::size_t>& coords) {
    NameTable out;
    out.num_partitions = coords.size();
    for (std::size_t c : coords) out.atom_counts.push_back(table.atom_counts[c]);
    std::map<std::vector<std::uint8_t>, Rat> merged;
    for (std::size_t cell = 0; cell < table.cell_count; ++cell) {
        std::vector<std::uint8_t> name;
        name.reserve(coords.size());
        for (std::size_t c : coords) name.push_back(table.name(cell)[c]);
        auto [it, fresh] = merged.try_emplace(std::move(name), Rat(0));
        it->second += table.weights[cell];
    }
    out.cell_count = merged.size();
    out.total_weight = Rat(0);
    for (auto& [name, w] : merged) {
        out.names.insert(out.names.end(), name.begin(), name.end());
        out.total_weight += w;
        out.weights.push_back(std::move(w));
    }
    return out;
}

}  // namespace pcx
