#include "vch/report_io.hpp"

#include "vch/error.hpp"
#include "vch/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace vch {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_num(const std::string& s, const std::string& where) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError(where + ": expected a number, got '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(line);
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return s;
}

MobilityKind parse_mobility(const std::string& s, const std::string& where) {
    if (s == "cutoff") return MobilityKind::cutoff;
    if (s == "degenerate") return MobilityKind::degenerate;
    if (s == "constant") return MobilityKind::constant;
    throw FormatError(where + ": unknown mobility '" + s + "'");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    return out;
}

fs::path run_csv(const fs::path& dir, const std::string& label) { return dir / ("run_" + label + ".csv"); }
fs::path run_snapshot(const fs::path& dir, const std::string& label, const char* which) {
    return dir / ("run_" + label + "_" + which + ".vchf");
}

}  // namespace

std::string mobility_name(MobilityKind kind) {
    switch (kind) {
        case MobilityKind::cutoff: return "cutoff";
        case MobilityKind::degenerate: return "degenerate";
        case MobilityKind::constant: return "constant";
    }
    return "unknown";
}

std::string sweep_kind_name(SweepKind kind) { return kind == SweepKind::theta ? "theta" : "refinement"; }

void write_text(const std::string& text, const fs::path& path) {
    auto out = open_out(path);
    out << text;
    if (!out) throw FormatError("failed writing " + path.string());
}

void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, const fs::path& path) {
    auto out = open_out(path);
    out << csv_header() << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
    if (!out) throw FormatError("failed writing " + path.string());
}

std::vector<DiagnosticsRecord> read_trajectory_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) throw FormatError(path.string() + ": unexpected CSV header");
    std::vector<DiagnosticsRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_csv_row(line));
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_report(const SweepReport& report, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw FormatError("cannot create report directory " + dir.string() + ": " + ec.message());

    const std::size_t primary = report.primary_count();
    std::ostringstream s;
    s << "# kind = " << sweep_kind_name(report.kind) << '\n';
    s << "# u0 = " << report.u0_description << '\n';
    s << "# min_u0 = " << num(report.min_u0) << '\n';
    s << "# entropy_u0 = " << num(report.entropy_u0) << '\n';
    s << "# eps_neg = " << num(report.eps_neg) << '\n';
    s << "# nonzero_fraction = " << num(report.nonzero_fraction) << '\n';
    s << "# gaps =";
    for (double g : report.gaps) s << ' ' << num(g);
    s << '\n';
    s << "# degenerate_gap = " << (report.degenerate_gap ? num(*report.degenerate_gap) : std::string("none")) << '\n';
    s << "label,mobility,theta,modes,complete,negativity_max,bound_shape,failure\n";
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunResult& r = report.runs[i];
        s << r.label << ',' << mobility_name(r.mobility.kind) << ',' << num(r.mobility.theta) << ',' << r.modes << ','
          << (r.complete ? 1 : 0) << ',';
        if (i < primary && i < report.negativity_max.size()) {
            s << num(report.negativity_max[i]) << ',' << num(report.negativity_bound_shape[i]);
        } else {
            s << ',';
        }
        s << ',' << sanitize(r.failure) << '\n';

        write_trajectory_csv(r.records, run_csv(dir, r.label));
        const double t_final = r.records.empty() ? 0.0 : r.records.back().t;
        write_snapshot(r.initial, 0.0, run_snapshot(dir, r.label, "initial"));
        write_snapshot(r.final_state, t_final, run_snapshot(dir, r.label, "final"));
    }
    write_text(s.str(), dir / "summary.csv");
}

SweepReport read_report(const fs::path& dir) {
    const fs::path summary = dir / "summary.csv";
    std::ifstream in(summary);
    if (!in) throw FormatError("cannot open " + summary.string());

    std::map<std::string, std::string> meta;
    std::string line;
    std::string header;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            const auto eq_bare = line.find(" =");
            if (eq_bare == std::string::npos) throw FormatError(summary.string() + ":" + std::to_string(line_no) + ": bad metadata line");
            meta[line.substr(2, eq_bare - 2)] = eq == std::string::npos ? std::string() : line.substr(eq + 3);
            continue;
        }
        header = line;
        break;
    }
    if (header != "label,mobility,theta,modes,complete,negativity_max,bound_shape,failure") {
        throw FormatError(summary.string() + ": unexpected column header");
    }
    for (const char* key : {"kind", "u0", "min_u0", "entropy_u0", "eps_neg", "nonzero_fraction", "gaps", "degenerate_gap"}) {
        if (!meta.count(key)) throw FormatError(summary.string() + ": missing metadata '" + key + "'");
    }

    SweepReport report;
    const std::string where = summary.string();
    if (meta["kind"] == "theta") report.kind = SweepKind::theta;
    else if (meta["kind"] == "refinement") report.kind = SweepKind::refinement;
    else throw FormatError(where + ": unknown sweep kind '" + meta["kind"] + "'");
    report.u0_description = meta["u0"];
    report.min_u0 = parse_num(meta["min_u0"], where);
    report.entropy_u0 = parse_num(meta["entropy_u0"], where);
    report.eps_neg = parse_num(meta["eps_neg"], where);
    report.nonzero_fraction = parse_num(meta["nonzero_fraction"], where);
    {
        std::istringstream gs(meta["gaps"]);
        std::string g;
        while (gs >> g) report.gaps.push_back(parse_num(g, where));
    }
    if (meta["degenerate_gap"] != "none") report.degenerate_gap = parse_num(meta["degenerate_gap"], where);

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string at = where + ":" + std::to_string(line_no);
        const auto cols = split(line, ',');
        if (cols.size() != 8) throw FormatError(at + ": expected 8 columns, found " + std::to_string(cols.size()));
        RunResult r;
        r.label = cols[0];
        r.mobility.kind = parse_mobility(cols[1], at);
        r.mobility.theta = parse_num(cols[2], at);
        r.modes = static_cast<int>(parse_num(cols[3], at));
        r.complete = cols[4] == "1";
        r.failure = cols[7];
        r.records = read_trajectory_csv(run_csv(dir, r.label));
        r.initial = read_snapshot(run_snapshot(dir, r.label, "initial")).field;
        r.final_state = read_snapshot(run_snapshot(dir, r.label, "final")).field;
        report.runs.push_back(std::move(r));
    }
    if (report.runs.empty()) throw FormatError(where + ": report lists no runs");
    fit_constants(report);
    return report;
}

}  // namespace vch
