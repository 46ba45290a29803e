#include "npvi/models/dataset.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "npvi/error.hpp"
#include "npvi/serialization.hpp"

namespace npvi {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && *begin == ' ') ++begin;
  if (begin < end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw InputError("CSV row " + std::to_string(row) + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

void DatasetTable::validate() const {
  if (covariates.rows() < 1) throw InputError("dataset needs at least one row");
  if (!covariates.allFinite()) throw InputError("dataset covariates must be finite");
  if (is_classification()) {
    if (labels.size() != covariates.rows())
      throw InputError("label count does not match the covariate rows");
    for (Index t = 0; t < labels.size(); ++t)
      if (labels(t) != 1.0 && labels(t) != -1.0)
        throw InputError("labels must be -1 or +1");
  } else {
    if (targets.rows() != covariates.rows())
      throw InputError("target rows do not match the covariate rows");
    if (!targets.allFinite()) throw InputError("dataset targets must be finite");
  }
}

std::pair<DatasetTable, DatasetTable> DatasetTable::split(double fraction) const {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("split fraction must lie in (0, 1)");
  const Index train = static_cast<Index>(std::floor(fraction * static_cast<double>(rows())));
  if (train < 1 || train >= rows())
    throw ConfigError("split leaves an empty train or test set");
  const Index test = rows() - train;
  DatasetTable a;
  DatasetTable b;
  a.covariates = covariates.topRows(train);
  b.covariates = covariates.bottomRows(test);
  if (is_classification()) {
    a.labels = labels.head(train);
    b.labels = labels.tail(test);
  } else {
    a.targets = targets.topRows(train);
    b.targets = targets.bottomRows(test);
  }
  return {std::move(a), std::move(b)};
}

std::string dataset_to_csv(const DatasetTable& table) {
  std::string out;
  const Index k = table.covariates.cols();
  for (Index i = 0; i < k; ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
  if (table.is_classification()) {
    out += k ? ",label" : "label";
  } else {
    for (Index v = 0; v < table.targets.cols(); ++v)
      out += ((k || v) ? ",v" : "v") + std::to_string(v + 1);
  }
  out += '\n';
  for (Index t = 0; t < table.rows(); ++t) {
    bool first = true;
    auto put = [&](const std::string& s) {
      if (!first) out += ',';
      out += s;
      first = false;
    };
    for (Index i = 0; i < k; ++i) put(format_double(table.covariates(t, i)));
    if (table.is_classification()) {
      put(table.labels(t) > 0 ? "1" : "-1");
    } else {
      for (Index v = 0; v < table.targets.cols(); ++v)
        put(format_double(table.targets(t, v)));
    }
    out += '\n';
  }
  return out;
}

DatasetTable dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  std::vector<std::size_t> x_cols;
  std::vector<std::size_t> v_cols;
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h == "label") {
      label_col = c;
    } else if (h.size() > 1 && h[0] == 'x') {
      x_cols.push_back(c);
    } else if (h.size() > 1 && h[0] == 'v') {
      v_cols.push_back(c);
    } else {
      throw InputError("unexpected CSV column '" + h + "'");
    }
  }
  if (label_col && !v_cols.empty())
    throw InputError("CSV mixes a label column with voxel columns");
  if (!label_col && v_cols.empty())
    throw InputError("CSV needs a label column or voxel columns");

  std::vector<std::vector<double>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      throw InputError("CSV row " + std::to_string(row_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    std::vector<double> values;
    for (const auto& f : fields) {
      if (f.empty()) throw InputError("CSV row " + std::to_string(row_no) + " has a missing entry");
      values.push_back(parse_double(f, row_no));
    }
    rows.push_back(std::move(values));
  }
  const Index t = static_cast<Index>(rows.size());
  DatasetTable table;
  table.covariates.resize(t, static_cast<Index>(x_cols.size()));
  if (label_col) table.labels.resize(t);
  else table.targets.resize(t, static_cast<Index>(v_cols.size()));
  for (Index r = 0; r < t; ++r) {
    const auto& values = rows[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < x_cols.size(); ++i)
      table.covariates(r, static_cast<Index>(i)) = values[x_cols[i]];
    if (label_col) {
      table.labels(r) = values[*label_col];
    } else {
      for (std::size_t v = 0; v < v_cols.size(); ++v)
        table.targets(r, static_cast<Index>(v)) = values[v_cols[v]];
    }
  }
  table.validate();
  return table;
}

}  // namespace npvi
