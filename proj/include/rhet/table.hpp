#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rhet {

enum class ColumnKind { continuous, binary, categorical };

const char* to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& s);

/// One covariate column. Binary and categorical values hold level codes
/// 0..levels.size()-1 stored as doubles.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> levels;
  std::vector<double> values;

  bool is_categorical() const { return kind != ColumnKind::continuous; }
  int n_levels() const { return static_cast<int>(levels.size()); }
  bool is_constant() const;
};

/// Column-major table of mixed-type covariates sharing one row count.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::vector<Column> columns);

  void add(Column column);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const Column& col(std::size_t j) const { return columns_[j]; }
  Column& col(std::size_t j) { return columns_[j]; }
  const std::vector<Column>& columns() const { return columns_; }
  double at(std::size_t row, std::size_t col) const { return columns_[col].values[row]; }

  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Returns the listed rows, in order.
  FeatureTable subset_rows(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

}  // namespace rhet
