#include "towlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace towlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

const char* class_name(NodeClass c) {
    switch (c) {
        case NodeClass::interior: return "interior";
        case NodeClass::strip: return "strip";
        case NodeClass::outside: return "outside";
    }
    return "?";
}

void write_header(std::ostream& os, int n, bool with_time) {
    for (int i = 0; i < n; ++i) os << "x" << (i + 1) << ",";
    if (with_time) os << "t,";
    os << "class,value\n";
}

}  // namespace

void write_field_csv(const LatticeField& field, std::ostream& os) {
    const Lattice& lat = *field.lattice;
    write_header(os, lat.dim(), false);
    for (int64_t idx : lat.active_nodes()) {
        const Point x = lat.node_point(idx);
        for (int i = 0; i < lat.dim(); ++i) os << format_double(x[i]) << ",";
        os << class_name(lat.node_class(idx)) << "," << format_double(field[idx]) << "\n";
    }
}

void write_field_csv_file(const LatticeField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_field_csv(field, os);
}

LatticeField read_field_csv_file(const std::shared_ptr<const Lattice>& lattice,
                                 const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty field CSV: " + path);
    LatticeField field(lattice);
    const Lattice& lat = *lattice;
    size_t row = 0;
    const auto& active = lat.active_nodes();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (row >= active.size())
            throw std::runtime_error("field CSV has more rows than lattice nodes: " + path);
        std::stringstream ss(line);
        std::string cell;
        const int64_t idx = active[row];
        const Point x = lat.node_point(idx);
        for (int i = 0; i < lat.dim(); ++i) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad CSV row: " + line);
            const double v = std::stod(cell);
            if (std::abs(v - x[i]) > 1e-9)
                throw std::runtime_error("field CSV does not match the lattice geometry");
        }
        if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad CSV row: " + line);
        if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad CSV row: " + line);
        field[idx] = std::stod(cell);
        ++row;
    }
    if (row != active.size())
        throw std::runtime_error("field CSV has fewer rows than lattice nodes: " + path);
    return field;
}

void write_spacetime_csv(const SpaceTimeField& field, std::ostream& os) {
    const Lattice& lat = *field.lattice;
    write_header(os, lat.dim(), true);
    for (int s = 0; s < field.slice_count; ++s) {
        const double t = field.time_of(s);
        for (int64_t idx : lat.active_nodes()) {
            const Point x = lat.node_point(idx);
            for (int i = 0; i < lat.dim(); ++i) os << format_double(x[i]) << ",";
            os << format_double(t) << "," << class_name(lat.node_class(idx)) << ","
               << format_double(field.at(idx, s)) << "\n";
        }
    }
}

void write_spacetime_csv_file(const SpaceTimeField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_spacetime_csv(field, os);
}

std::string solve_report_json(const SolveReport& rep) {
    nlohmann::ordered_json j;
    j["sweeps"] = rep.sweeps;
    j["final_defect"] = rep.final_defect;
    j["converged"] = rep.converged;
    j["wall_time_s"] = rep.wall_time_s;
    return j.dump(2) + "\n";
}

std::string value_estimate_json(const ValueEstimate& est) {
    nlohmann::ordered_json j;
    j["mean"] = est.mean;
    j["std_error"] = est.std_error;
    j["ci95_lo"] = est.ci95_lo;
    j["ci95_hi"] = est.ci95_hi;
    j["trials"] = est.trials;
    j["capped_fraction"] = est.capped_fraction;
    j["seed"] = est.seed;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

}  // namespace towlab
