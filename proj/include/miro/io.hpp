#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "miro/model.hpp"

namespace miro {

// A categorical covariate column expanded into reference-coded dummies.
struct CategoricalColumn {
    std::string name;
    std::vector<std::string> levels;  // sorted; levels[0] is the reference
};

struct LoadedDataset {
    TwoModeDataset data;
    std::vector<CategoricalColumn> actor_categoricals;
    std::vector<CategoricalColumn> event_categoricals;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::string> categorical;  // from a "#categorical:" directive
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& value);

/// Reads the attendance matrix and optional covariate files.
///
/// Y: header row of event names (first cell is a label), then one row per
/// actor: name followed by 0/1 entries. X and W: first column is the actor or
/// event name, remaining columns are covariates; rows are matched by name.
/// An optional second line "#categorical: a, b" lists columns to expand into
/// dummies named "column=level", dropping the first level in sorted order.
LoadedDataset load_dataset(const std::filesystem::path& y_path,
                           const std::optional<std::filesystem::path>& x_path = std::nullopt,
                           const std::optional<std::filesystem::path>& w_path = std::nullopt);

// Writes Y, and X/W when they have columns, as numeric CSVs readable by load_dataset.
void write_dataset(const TwoModeDataset& data, const std::filesystem::path& y_path,
                   const std::optional<std::filesystem::path>& x_path,
                   const std::optional<std::filesystem::path>& w_path);

// Twelve significant digits.
std::string format_number(double value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace miro
