#include "sks/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sks::io {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_norm_csv(std::ostream& out, const Trajectory& traj, const DomainSpec& dom, const EnergyBounds& bounds) {
    if (bounds.bound_h.size() != traj.size() || bounds.bound_v.size() != traj.size())
        throw std::invalid_argument("write_norm_csv: bounds misaligned with trajectory");
    out << norm_csv_header << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& u = traj.u_fields[i];
        const auto& w = traj.wa_fields[i];
        const double row[] = {traj.times[i], h_norm(u, dom),   v_norm(u, dom),     l4_norm(u, dom),
                              h_norm(w, dom), l4_norm(w, dom), bounds.bound_h[i], bounds.bound_v[i]};
        for (std::size_t c = 0; c < std::size(row); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

void write_snapshot_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    const int modes = traj.u_fields.empty() ? 0 : traj.u_fields.front().modes();
    for (int k = 1; k <= modes; ++k) out << ",u" << k;
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_number(traj.times[i]);
        for (std::size_t k = 0; k < traj.u_fields[i].size(); ++k) out << ',' << format_number(traj.u_fields[i][k]);
        out << '\n';
    }
}

nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json context = nlohmann::json::object();
    for (const auto& [key, value] : r.context) context[key] = value;
    return {{"name", r.name}, {"lhs", r.lhs},   {"rhs", r.rhs},        {"margin", r.margin},
            {"pass", r.pass}, {"degenerate", r.degenerate}, {"context", context}};
}

nlohmann::json to_json(const ConstantsLedger& l) {
    return {{"C1", l.C1},
            {"C2", l.C2},
            {"K", l.K},
            {"L", l.L},
            {"M", l.M},
            {"alpha", l.alpha},
            {"provenance",
             {{"C1", to_string(l.C1_source)},
              {"C2", to_string(l.C2_source)},
              {"L", to_string(l.L_source)},
              {"K", "derived"},
              {"M", "derived"},
              {"alpha", "derived"}}}};
}

ConstantsLedger ledger_from_json(const nlohmann::json& j) {
    const auto& p = j.at("provenance");
    return ConstantsLedger::derive(j.at("C1").get<double>(), j.at("C2").get<double>(), j.at("L").get<double>(),
                                         provenance_from_string(p.at("C1").get<std::string>()),
                                         provenance_from_string(p.at("C2").get<std::string>()),
                                         provenance_from_string(p.at("L").get<std::string>()));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace sks::io
