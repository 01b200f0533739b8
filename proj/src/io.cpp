#include "algrest/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace algrest {

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw InputError("table '" + name + "': row with " + std::to_string(cells.size()) +
                         " cells under " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(cells));
}

OutputFormat parse_format(const std::string& name) {
    if (name == "text") return OutputFormat::kText;
    if (name == "csv") return OutputFormat::kCsv;
    if (name == "jsonl") return OutputFormat::kJsonl;
    throw InputError("unknown output format '" + name + "' (expected text, csv or jsonl)");
}

namespace {

// Number of code points; our cells are ASCII except for a few one-column
// symbols (infinity, plus-minus), so this doubles as the display width.
size_t display_width(const std::string& s) {
    size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

std::string text_cell(const std::string& cell) { return cell == "inf" ? "∞" : cell; }

std::string csv_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string render_text(const Table& t) {
    std::vector<size_t> width(t.columns.size(), 0);
    for (size_t j = 0; j < t.columns.size(); ++j) width[j] = display_width(t.columns[j]);
    for (const auto& row : t.rows)
        for (size_t j = 0; j < row.size(); ++j)
            width[j] = std::max(width[j], display_width(text_cell(row[j])));

    std::ostringstream out;
    out << "# " << t.name << "\n";
    auto emit = [&](const std::vector<std::string>& cells, bool map_inf) {
        std::string line;
        for (size_t j = 0; j < cells.size(); ++j) {
            std::string cell = map_inf ? text_cell(cells[j]) : cells[j];
            line += cell;
            if (j + 1 < cells.size())
                line.append(width[j] - display_width(cell) + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    };
    emit(t.columns, false);
    std::string rule;
    for (size_t j = 0; j < t.columns.size(); ++j) {
        rule.append(width[j], '-');
        if (j + 1 < t.columns.size()) rule.append(2, ' ');
    }
    out << rule << "\n";
    for (const auto& row : t.rows) emit(row, true);
    return out.str();
}

std::string render_csv(const Table& t) {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (size_t j = 0; j < cells.size(); ++j) {
            if (j) out << ',';
            out << csv_cell(cells[j]);
        }
        out << "\r\n";
    };
    emit(t.columns);
    for (const auto& row : t.rows) emit(row);
    return out.str();
}

std::string render_jsonl(const Table& t) {
    std::ostringstream out;
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (size_t j = 0; j < t.columns.size(); ++j) obj[t.columns[j]] = row[j];
        out << obj.dump() << "\n";
    }
    return out.str();
}

std::string render_table(const Table& t, OutputFormat f) {
    switch (f) {
        case OutputFormat::kText: return render_text(t);
        case OutputFormat::kCsv: return render_csv(t);
        case OutputFormat::kJsonl: return render_jsonl(t);
    }
    throw InputError("unhandled output format");
}

namespace {

std::vector<std::vector<std::string>> csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;  // field content or separator seen on the current record
    size_t i = 0;
    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(record);
        record.clear();
        any = false;
    };
    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            any = true;
            ++i;
            continue;
        }
        if (c == ',') {
            end_field();
            any = true;
            ++i;
            continue;
        }
        if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            ++i;
            if (any || !field.empty() || !record.empty()) end_record();
            continue;
        }
        field += c;
        any = true;
        ++i;
    }
    if (quoted) throw ParseError("csv: unterminated quoted field");
    if (any || !field.empty() || !record.empty()) end_record();
    return records;
}

}  // namespace

Table parse_csv_table(const std::string& text) {
    auto records = csv_records(text);
    if (records.empty()) throw ParseError("csv: no header record");
    Table t;
    t.columns = records[0];
    for (size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.columns.size())
            throw ParseError("csv: record " + std::to_string(r + 1) + " has " +
                             std::to_string(records[r].size()) + " fields, header has " +
                             std::to_string(t.columns.size()));
        t.rows.push_back(records[r]);
    }
    return t;
}

Table parse_jsonl_table(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::ordered_json obj;
        try {
            obj = nlohmann::ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("jsonl line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!obj.is_object())
            throw ParseError("jsonl line " + std::to_string(lineno) + ": expected an object");
        if (t.columns.empty())
            for (const auto& [key, val] : obj.items()) t.columns.push_back(key);
        std::vector<std::string> row;
        size_t j = 0;
        for (const auto& [key, val] : obj.items()) {
            if (j >= t.columns.size() || key != t.columns[j])
                throw ParseError("jsonl line " + std::to_string(lineno) +
                                 ": keys differ from the first record");
            if (!val.is_string())
                throw ParseError("jsonl line " + std::to_string(lineno) + ": field '" + key +
                                 "' is not a string");
            row.push_back(val.get<std::string>());
            ++j;
        }
        if (j != t.columns.size())
            throw ParseError("jsonl line " + std::to_string(lineno) +
                             ": keys differ from the first record");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::optional<std::string> csv_diff(const std::string& got, const std::string& want) {
    auto a = csv_records(got);
    auto b = csv_records(want);
    size_t n = std::max(a.size(), b.size());
    for (size_t r = 0; r < n; ++r) {
        if (r >= a.size()) return "record " + std::to_string(r + 1) + ": missing (expected '" +
                                  b[r][0] + "', ...)";
        if (r >= b.size()) return "record " + std::to_string(r + 1) + ": unexpected extra row ('" +
                                  a[r][0] + "', ...)";
        size_t m = std::max(a[r].size(), b[r].size());
        for (size_t c = 0; c < m; ++c) {
            std::string va = c < a[r].size() ? a[r][c] : "<missing>";
            std::string vb = c < b[r].size() ? b[r][c] : "<missing>";
            if (va != vb)
                return "record " + std::to_string(r + 1) + ", field " + std::to_string(c + 1) +
                       ": got '" + va + "', expected '" + vb + "'";
        }
    }
    return std::nullopt;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw InputError("failed writing '" + path + "'");
}

std::string data_dir() {
    if (const char* env = std::getenv("ALGREST_DATA_DIR"); env && *env) return env;
#ifdef ALGREST_DATA_DIR
    return ALGREST_DATA_DIR;
#else
    return "data";
#endif
}

std::string golden_csv(const std::string& key) {
    return read_text_file(data_dir() + "/golden/" + key + ".csv");
}

}  // namespace algrest
