#include "photonet/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "photonet/model.hpp"

namespace photonet {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool parse_double(const std::string& text, double& value) {
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw Error("column '" + name + "' not found");
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double v = 0.0;
        if (!parse_double(rows[r][c], v)) {
            throw Error("non-numeric value '" + rows[r][c] + "' in column '" + name + "' at row " +
                        std::to_string(r + 1));
        }
        out.push_back(v);
    }
    return out;
}

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            table.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            continue;
        }
        auto fields = split_line(line);
        if (!have_header) {
            table.columns = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw Error("row " + std::to_string(table.rows.size() + 1) + " has " + std::to_string(fields.size()) +
                        " fields, header has " + std::to_string(table.columns.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) {
        throw Error("CSV has no header row");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    try {
        return parse_csv(in);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

bool CompareReport::ok() const {
    for (const auto& c : columns) {
        if (c.exceeds) {
            return false;
        }
    }
    return true;
}

std::string CompareReport::to_text() const {
    std::ostringstream out;
    out << "column,linf_rel,l2_rel" << (tolerance ? ",status" : "") << '\n';
    for (const auto& c : columns) {
        out << c.column << ',' << format_double(c.linf) << ',' << format_double(c.l2);
        if (tolerance) {
            out << ',' << (c.exceeds ? "FAIL" : "ok");
        }
        out << '\n';
    }
    return out.str();
}

std::string CompareReport::to_json() const {
    nlohmann::ordered_json j;
    j["tolerance"] = tolerance ? nlohmann::ordered_json(*tolerance) : nlohmann::ordered_json(nullptr);
    j["ok"] = ok();
    auto& cols = j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : columns) {
        cols.push_back({{"column", c.column}, {"linf", c.linf}, {"l2", c.l2}, {"exceeds", c.exceeds}});
    }
    return j.dump(2) + "\n";
}

CompareReport compare_tables(const CsvTable& a, const CsvTable& b, std::optional<double> tolerance) {
    if (a.columns != b.columns) {
        throw Error("column schemas differ");
    }
    if (a.rows.size() != b.rows.size()) {
        throw Error("row counts differ: " + std::to_string(a.rows.size()) + " vs " + std::to_string(b.rows.size()));
    }
    CompareReport report;
    report.tolerance = tolerance;
    const std::size_t t_col = a.column("t");
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        double ta = 0.0;
        double tb = 0.0;
        if (!parse_double(a.rows[r][t_col], ta) || !parse_double(b.rows[r][t_col], tb) ||
            std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) {
            throw Error("time grids differ at row " + std::to_string(r + 1));
        }
    }
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        // Labels and per-row diagnostics are not observables.
        if (c == t_col || a.columns[c] == "edge" || a.columns[c] == "residual") {
            continue;
        }
        double num_sq = 0.0;
        double den_sq = 0.0;
        double num_max = 0.0;
        double den_max = 0.0;
        bool numeric = true;
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            double va = 0.0;
            double vb = 0.0;
            if (!parse_double(a.rows[r][c], va) || !parse_double(b.rows[r][c], vb)) {
                numeric = false;
                break;
            }
            const double d = vb - va;
            num_sq += d * d;
            den_sq += va * va;
            num_max = std::max(num_max, std::abs(d));
            den_max = std::max(den_max, std::abs(va));
        }
        if (!numeric) {
            continue;
        }
        ColumnDeviation dev;
        dev.column = a.columns[c];
        // Relative to A; a column that is identically zero in A falls back to absolute.
        dev.linf = den_max > 0.0 ? num_max / den_max : num_max;
        dev.l2 = den_sq > 0.0 ? std::sqrt(num_sq / den_sq) : std::sqrt(num_sq);
        dev.exceeds = tolerance.has_value() && std::max(dev.linf, dev.l2) > *tolerance;
        report.columns.push_back(dev);
    }
    return report;
}

} // namespace photonet
