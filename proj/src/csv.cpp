#include "deepsupp/csv.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace deepsupp {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(trim(field));
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

double parse_number(const std::string& s, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size())
            return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad " + what +
                             " value '" + s + "'");
}

}  // namespace

BarSeries load_ohlcv_csv(const std::string& path, const std::string& ticker) {
    std::ifstream file(path);
    if (!file.is_open())
        throw std::runtime_error("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    do {
        if (!std::getline(file, line))
            throw std::runtime_error("'" + path + "' is empty");
        ++line_no;
    } while (trim(line).empty());

    static const std::array<const char*, 6> names = {"date", "open",  "high",
                                                     "low",  "close", "volume"};
    auto header = split_csv(line);
    std::array<std::size_t, 6> col{};
    for (std::size_t k = 0; k < names.size(); ++k) {
        auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
            return lower(h) == names[k];
        });
        if (it == header.end())
            throw std::runtime_error("'" + path + "': header missing column '" +
                                     names[k] + "'");
        col[k] = static_cast<std::size_t>(it - header.begin());
    }

    BarSeries series;
    series.ticker = ticker;
    std::vector<std::string> bad_rows;
    while (std::getline(file, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto fields = split_csv(line);
        if (fields.size() < header.size())
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        Bar bar;
        try {
            bar.timestamp = parse_timestamp(fields[col[0]]);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        bar.open = parse_number(fields[col[1]], "open", line_no);
        bar.high = parse_number(fields[col[2]], "high", line_no);
        bar.low = parse_number(fields[col[3]], "low", line_no);
        bar.close = parse_number(fields[col[4]], "close", line_no);
        bar.volume = parse_number(fields[col[5]], "volume", line_no);

        std::string why = bar_violation(bar);
        if (!why.empty())
            bad_rows.push_back("line " + std::to_string(line_no) + ": " + why);
        series.bars.push_back(bar);
    }
    if (!bad_rows.empty()) {
        std::string msg = "'" + path + "': invalid rows:";
        for (const auto& r : bad_rows)
            msg += "\n  " + r;
        throw std::runtime_error(msg);
    }
    if (series.bars.empty())
        throw std::runtime_error("'" + path + "': no data rows");

    std::stable_sort(series.bars.begin(), series.bars.end(),
                     [](const Bar& a, const Bar& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        if (series.bars[i].timestamp == series.bars[i - 1].timestamp)
            throw std::runtime_error("'" + path + "': duplicate timestamp " +
                                     format_timestamp(series.bars[i].timestamp));
    }
    check_series(series);
    return series;
}

void write_ohlcv_csv(const BarSeries& series, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open())
        throw std::runtime_error("cannot write '" + path + "'");
    file << "date,open,high,low,close,volume\n";
    char buf[512];
    for (const auto& bar : series.bars) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g",
                      format_timestamp(bar.timestamp).c_str(), bar.open, bar.high,
                      bar.low, bar.close, bar.volume);
        file << buf << '\n';
    }
    if (!file.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace deepsupp
