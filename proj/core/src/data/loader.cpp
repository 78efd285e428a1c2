#include "allockit/data/loader.hpp"

#include "allockit/error.hpp"
#include "allockit/io/csv.hpp"

namespace allockit::data {

namespace {

std::string at_row(std::size_t line) { return ", row " + std::to_string(line); }

YearMonth parse_date(const std::string& field, std::size_t line) {
    try {
        return YearMonth::parse(field);
    } catch (const DataError&) {
        throw DataError("invalid date '" + field + "'" + at_row(line));
    }
}

void check_shape(const io::CsvTable& table, std::size_t r) {
    if (table.rows[r].size() != table.header.size())
        throw DataError("ragged row: expected " + std::to_string(table.header.size()) + " fields, found " +
                        std::to_string(table.rows[r].size()) + at_row(table.line_numbers[r]));
}

void check_order(const std::vector<YearMonth>& dates, std::size_t line) {
    const std::size_t n = dates.size();
    if (n < 2) return;
    if (dates[n - 1] == dates[n - 2]) throw DataError("duplicate date " + dates[n - 1].to_string() + at_row(line));
    if (dates[n - 1] < dates[n - 2]) throw DataError("dates not increasing at " + dates[n - 1].to_string() + at_row(line));
}

}  // namespace

std::vector<PriceSeries> load_price_csv(const std::filesystem::path& path, std::span<const std::string> schema) {
    const io::CsvTable table = io::read_csv(path);
    if (table.header.empty() || table.header.front() != "date")
        throw DataError("first column of '" + path.string() + "' must be named 'date'");
    if (table.header.size() < 2) throw DataError("price file has no asset columns");

    std::vector<std::size_t> cols;
    if (schema.empty()) {
        for (std::size_t c = 1; c < table.header.size(); ++c) cols.push_back(c);
    } else {
        for (const auto& name : schema) {
            const auto c = table.column(name);
            if (!c || *c == 0) throw DataError("column '" + name + "' not found in '" + path.string() + "'");
            cols.push_back(*c);
        }
    }

    std::vector<PriceSeries> out(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) out[k].asset_id = table.header[cols[k]];

    std::vector<YearMonth> dates;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t line = table.line_numbers[r];
        check_shape(table, r);
        const auto& row = table.rows[r];
        dates.push_back(parse_date(row[0], line));
        check_order(dates, line);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto v = io::parse_double(row[cols[k]]);
            if (!v) throw DataError("unparseable value '" + row[cols[k]] + "' in column " + out[k].asset_id + at_row(line));
            if (!(*v > 0.0)) throw DataError("non-positive price" + at_row(line));
            out[k].prices.push_back(*v);
        }
    }
    for (auto& s : out) {
        s.dates = dates;
        s.validate();
    }
    return out;
}

InflationSeries load_inflation_csv(const std::filesystem::path& path) {
    const io::CsvTable table = io::read_csv(path);
    if (table.header.size() != 2 || table.header[0] != "date" || table.header[1] != "rate")
        throw DataError("inflation file '" + path.string() + "' must have columns date,rate");
    InflationSeries out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t line = table.line_numbers[r];
        check_shape(table, r);
        out.dates.push_back(parse_date(table.rows[r][0], line));
        check_order(out.dates, line);
        const auto v = io::parse_double(table.rows[r][1]);
        if (!v) throw DataError("unparseable rate '" + table.rows[r][1] + "'" + at_row(line));
        if (!(*v > -1.0)) throw DataError("inflation rate <= -1" + at_row(line));
        out.rates.push_back(*v);
    }
    out.validate();
    return out;
}

void write_price_csv(const std::filesystem::path& path, std::span<const PriceSeries> series) {
    if (series.empty()) throw DataError("no price series to write");
    io::CsvTable table;
    table.header.push_back("date");
    for (const auto& s : series) {
        if (s.dates != series.front().dates) throw DataError("price series must share dates to be written together");
        table.header.push_back(s.asset_id);
    }
    for (std::size_t t = 0; t < series.front().size(); ++t) {
        std::vector<std::string> row{series.front().dates[t].to_string()};
        for (const auto& s : series) row.push_back(io::format_double(s.prices[t]));
        table.rows.push_back(std::move(row));
    }
    io::write_csv(path, table);
}

void write_inflation_csv(const std::filesystem::path& path, const InflationSeries& inflation) {
    io::CsvTable table;
    table.header = {"date", "rate"};
    for (std::size_t t = 0; t < inflation.size(); ++t)
        table.rows.push_back({inflation.dates[t].to_string(), io::format_double(inflation.rates[t])});
    io::write_csv(path, table);
}

}  // namespace allockit::data
