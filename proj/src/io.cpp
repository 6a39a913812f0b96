#include "miro/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace miro {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string where(const std::filesystem::path& path, int line, int column = 0) {
    std::ostringstream out;
    out << path.string() << ":" << line;
    if (column > 0) out << ": column " << column;
    return out.str();
}

double parse_double(const std::string& text, const std::filesystem::path& path, int line, int column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where(path, line, column) + ": cannot parse number '" + text + "'");
    }
}

struct ExpandedCovariates {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
    std::vector<CategoricalColumn> categoricals;
};

// Matches the rows of `table` to `keys` by name and expands categorical columns.
ExpandedCovariates expand_covariates(const CsvTable& table, const std::vector<std::string>& keys,
                                     const std::filesystem::path& path) {
    const std::size_t num_columns = table.header.size();
    if (num_columns < 1) throw ValidationError(path.string() + ": missing header");
    for (const auto& c : table.categorical) {
        if (std::find(table.header.begin() + 1, table.header.end(), c) == table.header.end()) {
            throw ValidationError(path.string() + ": categorical column '" + c + "' not in header");
        }
    }
    std::map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != num_columns) {
            throw ValidationError(where(path, table.line_numbers[r]) + ": expected " + std::to_string(num_columns) +
                                  " fields, found " + std::to_string(table.rows[r].size()));
        }
        if (!row_of.emplace(table.rows[r][0], r).second) {
            throw ValidationError(where(path, table.line_numbers[r]) + ": duplicate name '" + table.rows[r][0] + "'");
        }
    }
    for (const auto& key : keys) {
        if (!row_of.count(key)) throw ValidationError(path.string() + ": no row for '" + key + "'");
    }
    if (row_of.size() != keys.size()) {
        throw ValidationError(path.string() + ": has " + std::to_string(row_of.size()) + " rows but " +
                              std::to_string(keys.size()) + " are expected");
    }

    ExpandedCovariates out;
    std::vector<std::vector<double>> columns;
    for (std::size_t c = 1; c < num_columns; ++c) {
        const std::string& name = table.header[c];
        const bool categorical = std::find(table.categorical.begin(), table.categorical.end(), name) != table.categorical.end();
        if (!categorical) {
            std::vector<double> col;
            for (const auto& key : keys) {
                const std::size_t r = row_of[key];
                col.push_back(parse_double(table.rows[r][c], path, table.line_numbers[r], static_cast<int>(c) + 1));
            }
            columns.push_back(std::move(col));
            out.names.push_back(name);
            continue;
        }
        std::set<std::string> level_set;
        for (const auto& row : table.rows) level_set.insert(row[c]);
        CategoricalColumn cat{name, {level_set.begin(), level_set.end()}};
        for (std::size_t level = 1; level < cat.levels.size(); ++level) {
            std::vector<double> col;
            for (const auto& key : keys) col.push_back(table.rows[row_of[key]][c] == cat.levels[level] ? 1.0 : 0.0);
            columns.push_back(std::move(col));
            out.names.push_back(name + "=" + cat.levels[level]);
        }
        out.categoricals.push_back(std::move(cat));
    }
    out.values.resize(static_cast<Eigen::Index>(keys.size()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (std::size_t r = 0; r < keys.size(); ++r) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                current.push_back('"');
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos && trim(value) == value) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    int number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.rfind("#categorical:", 0) == 0) {
            for (auto& field : split_csv_line(stripped.substr(13))) {
                if (!field.empty()) table.categorical.push_back(field);
            }
            continue;
        }
        if (stripped[0] == '#') continue;
        if (!have_header) {
            table.header = split_csv_line(line);
            have_header = true;
            continue;
        }
        table.rows.push_back(split_csv_line(line));
        table.line_numbers.push_back(number);
    }
    if (!have_header) throw ValidationError(path.string() + ": empty file");
    return table;
}

LoadedDataset load_dataset(const std::filesystem::path& y_path, const std::optional<std::filesystem::path>& x_path,
                           const std::optional<std::filesystem::path>& w_path) {
    const CsvTable ytable = read_csv(y_path);
    if (ytable.header.size() < 2) throw ValidationError(y_path.string() + ": header lists no events");
    if (ytable.rows.empty()) throw ValidationError(y_path.string() + ": empty dataset (no actor rows)");

    LoadedDataset out;
    TwoModeDataset& data = out.data;
    const auto d = static_cast<Eigen::Index>(ytable.header.size() - 1);
    const auto n = static_cast<Eigen::Index>(ytable.rows.size());
    data.event_names.assign(ytable.header.begin() + 1, ytable.header.end());
    data.y.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = ytable.rows[static_cast<std::size_t>(i)];
        const int line = ytable.line_numbers[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != d + 1) {
            throw ValidationError(where(y_path, line) + ": expected " + std::to_string(d + 1) + " fields, found " +
                                  std::to_string(row.size()));
        }
        data.actor_names.push_back(row[0]);
        for (Eigen::Index j = 0; j < d; ++j) {
            const std::string& cell = row[static_cast<std::size_t>(j + 1)];
            if (cell != "0" && cell != "1") {
                throw ValidationError(where(y_path, line, static_cast<int>(j) + 2) + ": non-binary entry '" + cell + "'");
            }
            data.y(i, j) = cell == "1" ? 1 : 0;
        }
    }
    auto check_unique = [](const std::vector<std::string>& names, const std::filesystem::path& path, const char* what) {
        std::set<std::string> seen;
        for (const auto& name : names) {
            if (!seen.insert(name).second) throw ValidationError(path.string() + ": duplicate " + what + " '" + name + "'");
        }
    };
    check_unique(data.actor_names, y_path, "actor");
    check_unique(data.event_names, y_path, "event");

    data.x.resize(n, 0);
    data.w.resize(d, 0);
    if (x_path) {
        auto expanded = expand_covariates(read_csv(*x_path), data.actor_names, *x_path);
        data.x = std::move(expanded.values);
        data.actor_covariate_names = std::move(expanded.names);
        out.actor_categoricals = std::move(expanded.categoricals);
    }
    if (w_path) {
        auto expanded = expand_covariates(read_csv(*w_path), data.event_names, *w_path);
        data.w = std::move(expanded.values);
        data.event_covariate_names = std::move(expanded.names);
        out.event_categoricals = std::move(expanded.categoricals);
    }
    require_valid(data);
    return out;
}

std::string format_number(double value) {
    std::ostringstream out;
    out << std::setprecision(12) << value;
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << contents;
}

void write_dataset(const TwoModeDataset& input, const std::filesystem::path& y_path,
                   const std::optional<std::filesystem::path>& x_path,
                   const std::optional<std::filesystem::path>& w_path) {
    const TwoModeDataset data = with_default_names(input);
    std::ostringstream y;
    y << "actor";
    for (const auto& e : data.event_names) y << "," << csv_field(e);
    y << "\n";
    for (int i = 0; i < data.n(); ++i) {
        y << csv_field(data.actor_names[static_cast<std::size_t>(i)]);
        for (int j = 0; j < data.d(); ++j) y << "," << data.y(i, j);
        y << "\n";
    }
    write_text_file(y_path, y.str());

    auto write_covariates = [](const Eigen::MatrixXd& values, const std::vector<std::string>& row_names,
                               const std::vector<std::string>& col_names, const char* label,
                               const std::filesystem::path& path) {
        std::ostringstream out;
        out << label;
        for (const auto& c : col_names) out << "," << csv_field(c);
        out << "\n";
        for (Eigen::Index r = 0; r < values.rows(); ++r) {
            out << csv_field(row_names[static_cast<std::size_t>(r)]);
            for (Eigen::Index c = 0; c < values.cols(); ++c) out << "," << format_number(values(r, c));
            out << "\n";
        }
        write_text_file(path, out.str());
    };
    if (x_path && data.x.cols() > 0) {
        write_covariates(data.x, data.actor_names, data.actor_covariate_names, "actor", *x_path);
    }
    if (w_path && data.w.cols() > 0) {
        write_covariates(data.w, data.event_names, data.event_covariate_names, "event", *w_path);
    }
}

}  // namespace miro
