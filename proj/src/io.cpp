#include "icd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "icd/errors.hpp"

#include <json.hpp>

namespace icd {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw IoError("cannot parse number '" + cell + "'");
    return v;
}

void write_scan_csv(const ScanResult& scan, std::ostream& out) {
    for (const auto& [key, value] : scan.metadata)
        out << "# " << key << "=" << value << "\n";
    for (std::size_t i = 0; i < scan.columns.size(); ++i)
        out << (i ? "," : "") << scan.columns[i];
    out << "\n";
    for (const auto& row : scan.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

ScanResult read_scan_csv(std::istream& in) {
    ScanResult scan;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const std::string entry = line.substr(2);
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw IoError("malformed metadata line '" + line + "'");
            scan.metadata[entry.substr(0, eq)] = entry.substr(eq + 1);
            continue;
        }
        if (!have_header) {
            scan.columns = split(line, ',');
            have_header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != scan.columns.size())
            throw IoError("row width does not match header in '" + line + "'");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(parse_double(cell));
        scan.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError("scan CSV has no header row");
    return scan;
}

void write_scan_csv_file(const ScanResult& scan, const std::filesystem::path& path) {
    std::ostringstream out;
    write_scan_csv(scan, out);
    write_file_atomic(path, out.str());
}

ScanResult read_scan_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_scan_csv(in);
}

std::string scan_to_json(const ScanResult& scan) {
    nlohmann::json j;
    j["metadata"] = scan.metadata;
    j["columns"] = scan.columns;
    j["rows"] = scan.rows;
    return j.dump(2) + "\n";
}

void write_scan_json_file(const ScanResult& scan, const std::filesystem::path& path) {
    write_file_atomic(path, scan_to_json(scan));
}

WidthDataset read_width_csv(std::istream& in, const std::string& label) {
    WidthDataset ds;
    ds.source_label = label;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty() || line.rfind("#", 0) == 0) continue;
        if (!have_header) {
            if (line != "rho_AA,width_eV")
                throw IoError("width CSV must start with header 'rho_AA,width_eV', got '" +
                              line + "'");
            have_header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 2)
            throw IoError("width CSV row must have 2 columns, got '" + line + "'");
        ds.rho_angstrom.push_back(parse_double(cells[0]));
        ds.width_ev.push_back(parse_double(cells[1]));
    }
    if (!have_header) throw IoError("width CSV has no header row");
    ds.validate();
    return ds;
}

WidthDataset read_width_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_width_csv(in, path.filename().string());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() +
                          "': " + ec.message());
}

} // namespace icd
