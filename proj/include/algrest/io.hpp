#pragma once

#include <optional>
#include <string>
#include <vector>

#include "algrest/errors.hpp"

namespace algrest {

// Rectangular all-string table: the unit every command renders, so the three
// output encodings live in one place and stay byte-deterministic.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Throws InputError when the cell count does not match the header.
    void add_row(std::vector<std::string> cells);

    bool operator==(const Table& o) const {
        return columns == o.columns && rows == o.rows;
    }
};

enum class OutputFormat { kText, kCsv, kJsonl };

// Accepts "text", "csv", "jsonl".
OutputFormat parse_format(const std::string& name);

// Aligned fixed-width columns under a title line. Cells holding the machine
// infinity spelling ("inf") display as the infinity sign.
std::string render_text(const Table& t);

// RFC 4180: comma separators, CRLF record ends, double-quote escaping for
// cells containing separators or quotes. One header record; the table name is
// not part of the stream.
std::string render_csv(const Table& t);

// One JSON object per row, keys in column order.
std::string render_jsonl(const Table& t);

std::string render_table(const Table& t, OutputFormat f);

// Inverse of render_csv; accepts LF or CRLF line ends. The name is left empty.
Table parse_csv_table(const std::string& text);

// Inverse of render_jsonl; the column order is taken from the first record.
Table parse_jsonl_table(const std::string& text);

// First difference between two CSV streams, compared record by record and
// cell by cell (hence independent of the line-ending convention); nullopt when
// they agree. The message names the row and column of the offending cell.
std::optional<std::string> csv_diff(const std::string& got, const std::string& want);

// Whole file as a string / string to a file. Throw InputError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Directory holding the golden table data: the ALGREST_DATA_DIR environment
// variable when set, otherwise the location recorded at build time.
std::string data_dir();

// Contents of data/golden/<key>.csv, e.g. key "w8_actions".
std::string golden_csv(const std::string& key);

}  // namespace algrest
