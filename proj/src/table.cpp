#include "rhet/table.hpp"

#include "rhet/error.hpp"

namespace rhet {

const char* to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::continuous: return "continuous";
    case ColumnKind::binary: return "binary";
    case ColumnKind::categorical: return "categorical";
  }
  return "?";
}

ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "continuous") return ColumnKind::continuous;
  if (s == "binary") return ColumnKind::binary;
  if (s == "categorical") return ColumnKind::categorical;
  throw SchemaError("unknown column kind '" + s + "'");
}

bool Column::is_constant() const {
  for (double v : values)
    if (v != values.front()) return false;
  return true;
}

FeatureTable::FeatureTable(std::vector<Column> columns) {
  for (auto& c : columns) add(std::move(c));
}

void FeatureTable::add(Column column) {
  if (columns_.empty())
    rows_ = column.values.size();
  else if (column.values.size() != rows_)
    throw DataError("column '" + column.name + "' has " + std::to_string(column.values.size()) +
                    " rows, expected " + std::to_string(rows_));
  if (find(column.name)) throw DataError("duplicate column '" + column.name + "'");
  columns_.push_back(std::move(column));
}

std::optional<std::size_t> FeatureTable::find(const std::string& name) const {
  for (std::size_t j = 0; j < columns_.size(); ++j)
    if (columns_[j].name == name) return j;
  return std::nullopt;
}

std::size_t FeatureTable::index_of(const std::string& name) const {
  if (auto j = find(name)) return *j;
  throw DataError("no column named '" + name + "'");
}

std::vector<std::string> FeatureTable::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

FeatureTable FeatureTable::subset_rows(const std::vector<std::size_t>& rows) const {
  FeatureTable out;
  for (const auto& c : columns_) {
    Column copy{c.name, c.kind, c.levels, {}};
    copy.values.reserve(rows.size());
    for (std::size_t r : rows) copy.values.push_back(c.values[r]);
    out.add(std::move(copy));
  }
  return out;
}

}  // namespace rhet
