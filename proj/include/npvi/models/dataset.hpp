#pragma once

#include <string>
#include <vector>

#include "npvi/types.hpp"

namespace npvi {

/**
 * Labeled table: a T x K covariate matrix plus either a label vector
 * (classification, labels in {-1, +1}) or a T x V block of real targets.
 *
 * CSV layout: header x1..xK then either a final "label" column or
 * v1..vV columns.
 */
struct DatasetTable {
  Matrix covariates;
  Vector labels;   // classification tables
  Matrix targets;  // activation tables

  Index rows() const { return covariates.rows(); }
  bool is_classification() const { return labels.size() > 0; }

  void validate() const;

  /// First `fraction` of the rows and the remainder.
  std::pair<DatasetTable, DatasetTable> split(double fraction) const;
};

std::string dataset_to_csv(const DatasetTable& table);
DatasetTable dataset_from_csv(const std::string& text);

}  // namespace npvi
