#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsaudit {

/// Calendar month encoded as year*12 + (month-1). Ordering of the encoded
/// value is chronological ordering.
class MonthIndex {
public:
    constexpr MonthIndex() = default;

    /// Throws std::invalid_argument unless month is in [1, 12].
    static MonthIndex from_year_month(int year, int month);
    static constexpr MonthIndex from_encoded(std::int64_t encoded) noexcept {
        MonthIndex m;
        m.encoded_ = encoded;
        return m;
    }

    [[nodiscard]] constexpr std::int64_t encoded() const noexcept { return encoded_; }
    [[nodiscard]] int year() const noexcept;
    [[nodiscard]] int month() const noexcept;
    /// "YYYY-MM"
    [[nodiscard]] std::string to_string() const;

    constexpr MonthIndex operator+(std::int64_t months) const noexcept {
        return from_encoded(encoded_ + months);
    }
    constexpr std::int64_t operator-(MonthIndex other) const noexcept {
        return encoded_ - other.encoded_;
    }
    constexpr auto operator<=>(const MonthIndex&) const = default;

private:
    std::int64_t encoded_ = 0;
};

/// An observation; std::nullopt is a missing value.
using Value = std::optional<double>;

/// Monthly series on a contiguous index. Gaps in the data are missing
/// values, never holes in the index.
class Series {
public:
    /// Throws std::invalid_argument if values is empty.
    Series(std::string name, MonthIndex start, std::vector<Value> values);
    /// Convenience for fully observed data.
    Series(std::string name, MonthIndex start, std::span<const double> values);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] MonthIndex start() const noexcept { return start_; }
    [[nodiscard]] MonthIndex end() const noexcept { return start_ + (static_cast<std::int64_t>(values_.size()) - 1); }
    [[nodiscard]] MonthIndex index_at(std::size_t i) const noexcept { return start_ + static_cast<std::int64_t>(i); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const Value& operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const Value> values() const noexcept { return values_; }

    [[nodiscard]] std::size_t count_observed() const noexcept;
    [[nodiscard]] bool fully_observed() const noexcept { return count_observed() == values_.size(); }
    /// True when both series cover the same months.
    [[nodiscard]] bool same_index(const Series& other) const noexcept {
        return start_ == other.start_ && values_.size() == other.values_.size();
    }

    /// Observed values in index order, missing entries skipped.
    [[nodiscard]] std::vector<double> observed() const;
    /// Sub-series from the first to the last observed value.
    /// Throws std::invalid_argument when nothing is observed.
    [[nodiscard]] Series trimmed() const;
    [[nodiscard]] Series renamed(std::string name) const;

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::string name_;
    MonthIndex start_;
    std::vector<Value> values_;
};

enum class DateFormat {
    YearDashMonth,     ///< one column holding "YYYY-MM"
    YearMonthColumns,  ///< two columns, year and month
};

struct CsvSelection {
    /// One column name for YearDashMonth, two (year, month) for YearMonthColumns.
    std::vector<std::string> date_columns{"date"};
    DateFormat date_format = DateFormat::YearDashMonth;
    std::vector<std::string> value_columns;
};

struct Provenance {
    std::string source;
    CsvSelection selection;
    std::size_t rows_read = 0;     ///< data rows in the file
    std::size_t rows_skipped = 0;  ///< rows with an empty date cell
};

/// Named series sharing one index.
class Dataset {
public:
    Dataset(std::vector<Series> columns, Provenance provenance);

    [[nodiscard]] const std::vector<Series>& columns() const noexcept { return columns_; }
    [[nodiscard]] const Provenance& provenance() const noexcept { return provenance_; }
    /// Throws InputError when absent.
    [[nodiscard]] const Series& column(const std::string& name) const;
    [[nodiscard]] bool has_column(const std::string& name) const noexcept;

private:
    std::vector<Series> columns_;
    Provenance provenance_;
};

/// Reads a UTF-8, comma-separated file with a header row. Empty cells and
/// "NA" are missing, as is any non-numeric cell. Rows whose date cells are all
/// empty are skipped; months absent from the file become missing values.
/// Throws InputError on unreadable files, unparseable dates, duplicate months,
/// unknown columns or an empty selection.
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path, const CsvSelection& selection);
[[nodiscard]] Dataset parse_csv(std::string_view text, const CsvSelection& selection,
                                std::string source = "<memory>");

/// Writes the dataset as CSV with a "date" column in YYYY-MM form. Values use
/// the shortest round-trip decimal representation, so reading the output back
/// reproduces every value bit for bit.
[[nodiscard]] std::string to_csv(const Dataset& dataset);

/// Fills interior gaps with the straight line through the bracketing
/// observations. Leading and trailing gaps stay missing.
/// Throws std::invalid_argument with fewer than two observed values.
[[nodiscard]] Series interpolate_linear(const Series& s);

/// order-fold first difference; the first `order` entries are missing and any
/// window touching a missing input is missing.
/// Throws std::invalid_argument unless 1 <= order < s.size().
[[nodiscard]] Series diff(const Series& s, int order = 1);

/// result[t] = s[t-k] on the same index.
[[nodiscard]] Series lag(const Series& s, int k);

}  // namespace tsaudit
