// Text formats: the partition serialization (bit-exact round trip), CSV
// emission with deterministic number formatting, and the long-format plot
// table. CSV dialect: comma-separated, LF endings, '.' decimals, headers.
#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcx/common.hpp"
#include "pcx/measure_space.hpp"
#include "pcx/partition.hpp"

namespace pcx {

inline std::string format_rat(const Rat& q) { return q.get_str(); }

// Shortest round-trip decimal form; deterministic across platforms.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// --- partition text format -------------------------------------------------
//
//   pcx-partition v1 interval <dim>      |  pcx-partition v1 points <N>
//   atom 0/1..1/3 1/2..2/3               |  atom 0 3 7
//   atom 1/3..1/2,0/1..1/2               |  atom (empty atom: bare keyword)
//
// Interval atoms list boxes separated by spaces; a box is dim axis ranges
// "lo..hi" joined by commas. All endpoints are exact rationals.

inline void write_partition(std::ostream& os, const Partition& p) {
    if (p.space->backend() == Backend::IntervalAlgebra) {
        os << "pcx-partition v1 interval " << p.space->dim() << "\n";
        for (const auto& atom : p.atoms) {
            os << "atom";
            const BoxSet& bs = atom.boxes();
            for (std::size_t b = 0; b < bs.box_count(); ++b) {
                os << ' ';
                for (int ax = 0; ax < bs.dim(); ++ax) {
                    if (ax) os << ',';
                    os << format_rat(bs.side(b, ax).lo) << ".." << format_rat(bs.side(b, ax).hi);
                }
            }
            os << "\n";
        }
        return;
    }
    os << "pcx-partition v1 points " << p.space->point_count() << "\n";
    for (const auto& atom : p.atoms) {
        os << "atom";
        for (std::size_t i = 0; i < atom.mask().size(); ++i)
            if (atom.mask()[i]) os << ' ' << i;
        os << "\n";
    }
}

inline std::string partition_to_string(const Partition& p) {
    std::ostringstream os;
    write_partition(os, p);
    return os.str();
}

inline Partition read_partition(std::istream& is, SpacePtr space) {
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("partition: empty input");
    std::istringstream hs(header);
    std::string magic, version, backend;
    hs >> magic >> version >> backend;
    if (magic != "pcx-partition" || version != "v1")
        throw std::invalid_argument("partition: bad header");
    std::vector<MeasurableSet> atoms;
    if (backend == "interval") {
        int dim = 0;
        hs >> dim;
        if (!space) space = MeasureSpace::interval(dim);
        if (space->backend() != Backend::IntervalAlgebra || space->dim() != dim)
            throw std::invalid_argument("partition: space does not match serialized header");
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string kw;
            ls >> kw;
            if (kw != "atom") throw std::invalid_argument("partition: expected atom line");
            std::vector<Interval> flat;
            std::string box;
            while (ls >> box) {
                std::size_t start = 0;
                int axes = 0;
                while (start <= box.size()) {
                    std::size_t comma = box.find(',', start);
                    std::string range = box.substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start);
                    std::size_t dots = range.find("..");
                    if (dots == std::string::npos)
                        throw std::invalid_argument("partition: bad interval " + range);
                    flat.push_back({parse_rat(range.substr(0, dots)),
                                    parse_rat(range.substr(dots + 2))});
                    ++axes;
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                if (axes != dim) throw std::invalid_argument("partition: box dimension mismatch");
            }
            atoms.push_back(MeasurableSet::from_boxes(BoxSet::from_flat(dim, std::move(flat))));
        }
    } else if (backend == "points") {
        std::size_t n = 0;
        hs >> n;
        if (!space) space = MeasureSpace::uniform_points(n);
        if (space->backend() != Backend::WeightedPoints || space->point_count() != n)
            throw std::invalid_argument("partition: space does not match serialized header");
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string kw;
            ls >> kw;
            if (kw != "atom") throw std::invalid_argument("partition: expected atom line");
            std::vector<bool> mask(n, false);
            std::size_t idx;
            while (ls >> idx) {
                if (idx >= n) throw std::invalid_argument("partition: point index out of range");
                mask[idx] = true;
            }
            atoms.push_back(MeasurableSet::from_mask(std::move(mask)));
        }
    } else {
        throw std::invalid_argument("partition: unknown backend " + backend);
    }
    return make_partition(std::move(space), std::move(atoms));
}

inline Partition partition_from_string(const std::string& text, SpacePtr space = nullptr) {
    std::istringstream is(text);
    return read_partition(is, std::move(space));
}

// --- CSV -------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            os << header[i];
        }
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                os << row[i];
            }
            os << '\n';
        }
        return os.str();
    }
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline CsvTable parse_csv(const std::string& content) {
    CsvTable table;
    std::istringstream is(content);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

// Long-format table (experiment, n, value, quantity) from profile CSVs. The
// value column is the first non-"n" numeric profile column; its header name
// becomes the quantity label.
inline CsvTable plot_data_from_profiles(const std::vector<std::string>& csv_paths) {
    CsvTable out;
    out.header = {"experiment", "n", "value", "quantity"};
    for (const auto& path : csv_paths) {
        CsvTable in = parse_csv(read_text_file(path));
        if (in.header.empty() || in.header.front() != "n")
            throw std::invalid_argument("plot data: not a profile CSV: " + path);
        static const std::vector<std::string> known{"cover_size", "entropy", "p_star", "c_value"};
        std::size_t col = in.header.size();
        for (std::size_t i = 1; i < in.header.size() && col == in.header.size(); ++i)
            for (const auto& k : known)
                if (in.header[i] == k) col = i;
        if (col == in.header.size())
            throw std::invalid_argument("plot data: no known value column in " + path);
        std::string stem = path;
        if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
            stem = stem.substr(slash + 1);
        if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
        for (const auto& row : in.rows)
            out.rows.push_back({stem, row.at(0), row.at(col), in.header[col]});
    }
    return out;
}

}  // namespace pcx
