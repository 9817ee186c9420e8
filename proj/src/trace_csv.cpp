#include <fstream>
#include <sstream>

#include "cylarm/report.hpp"
#include "number_format.hpp"

namespace cylarm {

namespace {

void append_vec(std::string& out, const Vec3& v) {
    for (int j = 0; j < 3; ++j) {
        out += ',';
        append_shortest(out, v[j]);
    }
}

Vec3 read_vec(const std::vector<std::string_view>& cells, std::size_t at) {
    return Vec3(parse_double(cells[at]), parse_double(cells[at + 1]), parse_double(cells[at + 2]));
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns = {
        "t",      "q1",     "q2",     "q3",     "qd1",    "qd2",    "qd3",    "e1",
        "e2",     "e3",     "s1",     "s2",     "s3",     "tau1",   "tau2",   "tau3",
        "taueq1", "taueq2", "taueq3", "tausw1", "tausw2", "tausw3", "taunn1", "taunn2",
        "taunn3", "fext1",  "fext2",  "fext3",  "V"};
    return columns;
}

std::string format_csv(const SimTrace& trace) {
    std::string out;
    out.reserve(64 + trace.records.size() * 29 * 22);
    const auto& columns = csv_columns();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (const TraceRecord& r : trace.records) {
        append_shortest(out, r.t);
        append_vec(out, r.q);
        append_vec(out, r.q_d);
        append_vec(out, r.e);
        append_vec(out, r.control.s);
        append_vec(out, r.tau);
        append_vec(out, r.control.tau_eq);
        append_vec(out, r.control.tau_sw);
        append_vec(out, r.control.tau_nn);
        append_vec(out, r.f_ext);
        out += ',';
        append_shortest(out, r.V);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_csv(const SimTrace& trace, const std::filesystem::path& path) {
    write_text_file(path, format_csv(trace));
}

SimTrace parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
    const auto header = split_csv_line(line);
    const auto& columns = csv_columns();
    if (header.size() != columns.size() || !std::equal(header.begin(), header.end(), columns.begin())) {
        throw std::invalid_argument("csv: unexpected header");
    }

    SimTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != columns.size()) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(columns.size()) + " columns");
        }
        TraceRecord r;
        r.t = parse_double(cells[0]);
        r.q = read_vec(cells, 1);
        r.q_d = read_vec(cells, 4);
        r.e = read_vec(cells, 7);
        r.control.s = read_vec(cells, 10);
        r.tau = read_vec(cells, 13);
        r.control.tau_eq = read_vec(cells, 16);
        r.control.tau_sw = read_vec(cells, 19);
        r.control.tau_nn = read_vec(cells, 22);
        r.control.tau_total = (r.control.tau_eq + r.control.tau_sw) + r.control.tau_nn;
        r.f_ext = read_vec(cells, 25);
        r.V = parse_double(cells[28]);
        trace.records.push_back(r);
    }
    if (trace.records.size() >= 2) trace.dt = trace.records[1].t - trace.records[0].t;
    return trace;
}

SimTrace read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

}  // namespace cylarm
