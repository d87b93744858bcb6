#include "cqsim/csv.hpp"

#include "cqsim/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace cqsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

std::string unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return std::string(s);
}

template <class T>
bool parse_number(std::string_view cell, T& value) {
    if (!cell.empty() && cell.front() == '+')
        cell.remove_prefix(1);
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    return ec == std::errc() && ptr == end && !cell.empty();
}

std::string where(std::string_view source, std::size_t line, std::size_t column = 0) {
    std::string s = std::string(source) + ":" + std::to_string(line);
    if (column > 0)
        s += ", column " + std::to_string(column);
    return s;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    return in;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ScoreMatrix parse_scores_csv(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty())
            break;
    }
    if (trim(line).empty())
        throw DataError(std::string(source) + ": empty scores file");
    for (const auto cell : split(line))
        names.push_back(unquote(cell));
    const std::size_t k = names.size();

    std::vector<double> flat;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != k)
            throw DataError(where(source, line_no) + ": expected " + std::to_string(k) +
                            " fields, found " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < k; ++c) {
            double v = 0.0;
            if (!parse_number(cells[c], v) || !std::isfinite(v))
                throw DataError(where(source, line_no, c + 1) + ": '" + std::string(cells[c]) +
                                "' is not a finite number");
            flat.push_back(v);
        }
        ++rows;
    }

    Eigen::MatrixXd values(static_cast<Index>(rows), static_cast<Index>(k));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < k; ++c)
            values(static_cast<Index>(r), static_cast<Index>(c)) = flat[r * k + c];
    try {
        return ScoreMatrix(std::move(values), std::move(names));
    } catch (const DataError& e) {
        throw DataError(std::string(source) + ": " + e.what());
    }
}

ScoreMatrix read_scores_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_scores_csv(in, path.string());
}

std::vector<int> parse_labels_csv(std::istream& in, std::string_view source) {
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto cell = trim(line);
        if (cell.empty())
            continue;
        int v = 0;
        if (!parse_number(cell, v)) {
            if (first) {
                first = false;
                continue; // header
            }
            throw DataError(where(source, line_no) + ": '" + std::string(cell) +
                            "' is not an integer label");
        }
        first = false;
        labels.push_back(v);
    }
    if (labels.empty())
        throw DataError(std::string(source) + ": no labels found");
    return labels;
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_labels_csv(in, path.string());
}

void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names) {
    for (std::size_t c = 0; c < names.size(); ++c)
        out << (c ? "," : "") << names[c];
    out << '\n';
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c)
            out << (c ? "," : "") << format_double(values(r, c));
        out << '\n';
    }
}

void write_labels_csv(std::ostream& out, std::span<const int> labels, std::string_view header) {
    out << header << '\n';
    for (const int l : labels)
        out << l << '\n';
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names) {
    out << "detector";
    for (const auto& n : names)
        out << ',' << n;
    out << '\n';
    for (Index r = 0; r < values.rows(); ++r) {
        out << names[static_cast<std::size_t>(r)];
        for (Index c = 0; c < values.cols(); ++c)
            out << ',' << format_double(values(r, c));
        out << '\n';
    }
}

} // namespace cqsim
