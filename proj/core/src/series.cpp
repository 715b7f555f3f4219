#include "tsaudit/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tsaudit/error.hpp"

namespace tsaudit {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// RFC 4180 style record splitting: quoted fields may contain commas and
// doubled quotes. Embedded newlines inside quotes are not supported.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty() || cell == "NA") return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

int parse_integer_cell(std::string_view cell, const char* what, std::size_t line_no) {
    const auto v = parse_number(cell);
    if (!v || *v != std::floor(*v) || std::abs(*v) > 1e6) {
        throw InputError("line " + std::to_string(line_no) + ": unparseable " + what + " '" +
                         std::string(trim(cell)) + "'");
    }
    return static_cast<int>(*v);
}

MonthIndex parse_year_dash_month(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    const auto fail = [&]() -> MonthIndex {
        throw InputError("line " + std::to_string(line_no) + ": unparseable date '" + std::string(cell) +
                         "' (expected YYYY-MM)");
    };
    const auto dash = cell.find('-', 1);
    if (dash == std::string_view::npos) return fail();
    int year = 0;
    int month = 0;
    const auto ys = cell.substr(0, dash);
    const auto ms = cell.substr(dash + 1);
    auto r1 = std::from_chars(ys.data(), ys.data() + ys.size(), year);
    auto r2 = std::from_chars(ms.data(), ms.data() + ms.size(), month);
    if (r1.ec != std::errc{} || r1.ptr != ys.data() + ys.size() || r2.ec != std::errc{} ||
        r2.ptr != ms.data() + ms.size() || month < 1 || month > 12) {
        return fail();
    }
    return MonthIndex::from_year_month(year, month);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

MonthIndex MonthIndex::from_year_month(int year, int month) {
    if (month < 1 || month > 12) throw std::invalid_argument("month must be in [1, 12]");
    return from_encoded(static_cast<std::int64_t>(year) * 12 + (month - 1));
}

int MonthIndex::year() const noexcept { return static_cast<int>(floor_div(encoded_, 12)); }

int MonthIndex::month() const noexcept {
    return static_cast<int>(encoded_ - floor_div(encoded_, 12) * 12) + 1;
}

std::string MonthIndex::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
}

Series::Series(std::string name, MonthIndex start, std::vector<Value> values)
    : name_(std::move(name)), start_(start), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("series '" + name_ + "' must have at least one entry");
    for (auto& v : values_) {
        if (v && !std::isfinite(*v)) v.reset();
    }
}

Series::Series(std::string name, MonthIndex start, std::span<const double> values)
    : Series(std::move(name), start, std::vector<Value>(values.begin(), values.end())) {}

std::size_t Series::count_observed() const noexcept {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](const Value& v) { return v.has_value(); }));
}

std::vector<double> Series::observed() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_) {
        if (v) out.push_back(*v);
    }
    return out;
}

Series Series::trimmed() const {
    const auto first = std::find_if(values_.begin(), values_.end(), [](const Value& v) { return v.has_value(); });
    if (first == values_.end()) throw std::invalid_argument("series '" + name_ + "' has no observed values");
    const auto last = std::find_if(values_.rbegin(), values_.rend(), [](const Value& v) { return v.has_value(); });
    const auto offset = first - values_.begin();
    return Series(name_, start_ + offset, std::vector<Value>(first, last.base()));
}

Series Series::renamed(std::string name) const {
    Series out = *this;
    out.name_ = std::move(name);
    return out;
}

Dataset::Dataset(std::vector<Series> columns, Provenance provenance)
    : columns_(std::move(columns)), provenance_(std::move(provenance)) {
    if (columns_.empty()) throw std::invalid_argument("dataset needs at least one column");
    for (const auto& c : columns_) {
        if (!c.same_index(columns_.front())) throw std::invalid_argument("dataset columns must share one index");
    }
}

const Series& Dataset::column(const std::string& name) const {
    for (const auto& c : columns_) {
        if (c.name() == name) return c;
    }
    throw InputError("no column named '" + name + "'");
}

bool Dataset::has_column(const std::string& name) const noexcept {
    return std::any_of(columns_.begin(), columns_.end(), [&](const Series& c) { return c.name() == name; });
}

Dataset parse_csv(std::string_view text, const CsvSelection& selection, std::string source) {
    const std::size_t n_date = selection.date_format == DateFormat::YearDashMonth ? 1 : 2;
    if (selection.date_columns.size() != n_date) {
        throw InputError(n_date == 1 ? "YYYY-MM dates need exactly one date column"
                                     : "year,month dates need exactly two date columns");
    }
    if (selection.value_columns.empty()) throw InputError("no value columns selected");

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) {
            header = split_record(line);
            break;
        }
    }
    if (header.empty()) throw InputError(source + ": missing header row");
    for (auto& h : header) h = std::string(trim(h));

    const auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InputError(source + ": no column named '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> date_idx;
    for (const auto& d : selection.date_columns) date_idx.push_back(find_col(d));
    std::vector<std::size_t> value_idx;
    for (const auto& v : selection.value_columns) value_idx.push_back(find_col(v));

    std::map<MonthIndex, std::vector<Value>> rows;
    Provenance prov{source, selection, 0, 0};
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++prov.rows_read;
        auto fields = split_record(line);
        fields.resize(std::max(fields.size(), header.size()));
        const bool no_date = std::all_of(date_idx.begin(), date_idx.end(), [&](std::size_t i) {
            const auto cell = trim(fields[i]);
            return cell.empty() || cell == "NA";
        });
        if (no_date) {
            ++prov.rows_skipped;
            continue;
        }
        MonthIndex when;
        if (selection.date_format == DateFormat::YearDashMonth) {
            when = parse_year_dash_month(fields[date_idx[0]], line_no);
        } else {
            const int year = parse_integer_cell(fields[date_idx[0]], "year", line_no);
            const int month = parse_integer_cell(fields[date_idx[1]], "month", line_no);
            if (month < 1 || month > 12) {
                throw InputError("line " + std::to_string(line_no) + ": month out of range");
            }
            when = MonthIndex::from_year_month(year, month);
        }
        std::vector<Value> vals;
        vals.reserve(value_idx.size());
        for (const auto i : value_idx) vals.push_back(parse_number(fields[i]));
        if (!rows.emplace(when, std::move(vals)).second) {
            throw InputError("line " + std::to_string(line_no) + ": duplicate month " + when.to_string());
        }
    }
    if (rows.empty()) throw InputError(source + ": no data rows");

    const MonthIndex first = rows.begin()->first;
    const auto length = static_cast<std::size_t>(rows.rbegin()->first - first + 1);
    std::vector<std::vector<Value>> cols(value_idx.size(), std::vector<Value>(length));
    for (const auto& [when, vals] : rows) {
        const auto pos = static_cast<std::size_t>(when - first);
        for (std::size_t c = 0; c < vals.size(); ++c) cols[c][pos] = vals[c];
    }
    std::vector<Series> series;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        series.emplace_back(selection.value_columns[c], first, std::move(cols[c]));
    }
    return Dataset(std::move(series), std::move(prov));
}

Dataset load_csv(const std::filesystem::path& path, const CsvSelection& selection) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), selection, path.string());
}

std::string to_csv(const Dataset& dataset) {
    std::string out = "date";
    for (const auto& c : dataset.columns()) {
        out += ',';
        out += c.name();
    }
    out += '\n';
    const auto& first = dataset.columns().front();
    for (std::size_t i = 0; i < first.size(); ++i) {
        out += first.index_at(i).to_string();
        for (const auto& c : dataset.columns()) {
            out += ',';
            if (c[i]) out += format_double(*c[i]);
        }
        out += '\n';
    }
    return out;
}

Series interpolate_linear(const Series& s) {
    if (s.count_observed() < 2) {
        throw std::invalid_argument("interpolation of '" + s.name() + "' needs at least two observed values");
    }
    std::vector<Value> out(s.values().begin(), s.values().end());
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out[i]) continue;
        if (prev && i - *prev > 1) {
            const double y0 = *out[*prev];
            const double y1 = *out[i];
            const double span = static_cast<double>(i - *prev);
            for (std::size_t j = *prev + 1; j < i; ++j) {
                const double w = static_cast<double>(j - *prev) / span;
                out[j] = y0 + w * (y1 - y0);
            }
        }
        prev = i;
    }
    return Series(s.name(), s.start(), std::move(out));
}

Series diff(const Series& s, int order) {
    if (order < 1) throw std::invalid_argument("difference order must be >= 1");
    if (s.size() <= static_cast<std::size_t>(order)) {
        throw std::invalid_argument("series '" + s.name() + "' is too short to difference " + std::to_string(order) +
                                    " time(s)");
    }
    std::vector<Value> cur(s.values().begin(), s.values().end());
    for (int k = 0; k < order; ++k) {
        std::vector<Value> next(cur.size());
        for (std::size_t t = 1; t < cur.size(); ++t) {
            if (cur[t] && cur[t - 1]) next[t] = *cur[t] - *cur[t - 1];
        }
        cur = std::move(next);
    }
    return Series(s.name(), s.start(), std::move(cur));
}

Series lag(const Series& s, int k) {
    if (k < 1) throw std::invalid_argument("lag must be >= 1");
    std::vector<Value> out(s.size());
    for (std::size_t t = static_cast<std::size_t>(k); t < s.size(); ++t) out[t] = s[t - static_cast<std::size_t>(k)];
    return Series(s.name(), s.start(), std::move(out));
}

}  // namespace tsaudit
