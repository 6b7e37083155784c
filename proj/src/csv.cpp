#include "sssn/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <vector>

#include "sssn/error.hpp"

namespace sssn {

std::string format_number(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) return cells;
        start = comma + 1;
    }
}

std::optional<double> parse_cell(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
    return v;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": line " + std::to_string(line) + ": " + what);
}

}  // namespace

PanelSeries read_panel_csv(std::istream& in, std::string_view source) {
    std::vector<double> values;
    std::size_t width = 0;
    std::size_t rows = 0;
    bool first = true;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        std::vector<double> row;
        row.reserve(cells.size());
        std::optional<std::size_t> bad;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto v = parse_cell(cells[j]);
            if (!v) {
                bad = j;
                break;
            }
            row.push_back(*v);
        }
        if (first) {
            first = false;
            width = cells.size();
            if (bad) continue;  // header
        }
        if (cells.size() != width) {
            fail(source, number, "expected " + std::to_string(width) + " fields, found " +
                                     std::to_string(cells.size()));
        }
        if (bad) {
            fail(source, number, "column " + std::to_string(*bad + 1) + ": non-numeric cell '" +
                                     std::string(cells[*bad]) + "'");
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!std::isfinite(row[j])) {
                fail(source, number, "column " + std::to_string(j + 1) + ": non-finite value");
            }
        }
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (in.bad()) {
        throw Error(ErrorCode::IoError, std::string(source) + ": read failed");
    }
    if (rows == 0) {
        throw Error(ErrorCode::ParseError, std::string(source) + ": no data rows");
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t j = 0; j < width; ++j) {
            data(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = values[t * width + j];
        }
    }
    return PanelSeries(std::move(data));
}

PanelSeries read_panel_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    return read_panel_csv(in, path.string());
}

void write_panel_csv(const PanelSeries& panel, std::ostream& out, bool header) {
    const auto& x = panel.data();
    if (header) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? ",x" : "x") << j + 1;
        out << '\n';
    }
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j) out << ',';
            out << format_number(x(t, j));
        }
        out << '\n';
    }
}

void write_panel_csv(const PanelSeries& panel, const std::filesystem::path& path, bool header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    }
    write_panel_csv(panel, out, header);
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
    }
}

}  // namespace sssn
