#include "archk/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "archk/digest.hpp"
#include "archk/errors.hpp"

namespace archk {

using njson = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) raise(Errc::IoError, "failed while reading '" + path + "'");
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(Errc::IoError, "failed while writing '" + path + "'");
}

namespace {

njson parse_or_throw(const std::string& text, const char* what) {
  njson parsed = njson::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    raise(Errc::ParseError, std::string(what) + ": malformed JSON");
  }
  return parsed;
}

void expect_object(const njson& value, const std::string& context) {
  if (!value.is_object()) raise(Errc::ParseError, context + " must be a JSON object");
}

void expect_keys(const njson& object, std::initializer_list<std::string_view> allowed,
                 const std::string& context) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      raise(Errc::ParseError, context + ": unknown key '" + item.key() + "'");
    }
  }
}

const njson& require_key(const njson& object, const char* key, const std::string& context) {
  const auto it = object.find(key);
  if (it == object.end()) raise(Errc::ParseError, context + ": missing key '" + key + "'");
  return *it;
}

double as_number(const njson& value, const std::string& context) {
  if (!value.is_number()) raise(Errc::ParseError, context + " must be a number");
  return value.get<double>();
}

std::string as_string(const njson& value, const std::string& context) {
  if (!value.is_string()) raise(Errc::ParseError, context + " must be a string");
  return value.get<std::string>();
}

std::vector<std::string> as_string_array(const njson& value, const std::string& context) {
  if (!value.is_array()) raise(Errc::ParseError, context + " must be an array of strings");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const njson& item : value) out.push_back(as_string(item, context + " entries"));
  return out;
}

}  // namespace

SpaceDescription parse_space_json(const std::string& text) {
  const njson root = parse_or_throw(text, "space file");
  expect_object(root, "space file");
  expect_keys(root, {"dimensions", "conditions"}, "space file");

  SpaceDescription out;
  const njson& dims = require_key(root, "dimensions", "space file");
  if (!dims.is_array()) raise(Errc::ParseError, "space file: 'dimensions' must be an array");
  for (const njson& entry : dims) {
    expect_object(entry, "dimension entry");
    const std::string id = as_string(require_key(entry, "id", "dimension entry"), "'id'");
    const std::string context = "dimension '" + id + "'";
    const std::string type = as_string(require_key(entry, "type", context), context + " 'type'");
    Dimension dim;
    dim.id = id;
    if (type == "real") {
      expect_keys(entry, {"id", "type", "lower", "upper"}, context);
      RealBounded bounds;
      bounds.lower = as_number(require_key(entry, "lower", context), context + " 'lower'");
      bounds.upper = as_number(require_key(entry, "upper", context), context + " 'upper'");
      dim.domain = bounds;
    } else if (type == "categorical") {
      expect_keys(entry, {"id", "type", "values"}, context);
      Categorical categories;
      categories.values =
          as_string_array(require_key(entry, "values", context), context + " 'values'");
      dim.domain = std::move(categories);
    } else {
      raise(Errc::ParseError, context + ": type must be 'real' or 'categorical'");
    }
    out.dimensions.push_back(std::move(dim));
  }

  if (root.contains("conditions")) {
    const njson& conditions = root["conditions"];
    if (!conditions.is_array()) {
      raise(Errc::ParseError, "space file: 'conditions' must be an array");
    }
    for (const njson& entry : conditions) {
      expect_object(entry, "condition entry");
      expect_keys(entry, {"target", "governor", "allowed"}, "condition entry");
      ActivationClause clause;
      clause.target = as_string(require_key(entry, "target", "condition entry"), "'target'");
      clause.governor = as_string(require_key(entry, "governor", "condition entry"), "'governor'");
      clause.allowed =
          as_string_array(require_key(entry, "allowed", "condition entry"), "'allowed'");
      out.conditions.push_back(std::move(clause));
    }
  }
  return out;
}

std::string space_to_json(const SpaceDescription& description) {
  njson dims = njson::array();
  for (const Dimension& dim : description.dimensions) {
    njson entry;
    entry["id"] = dim.id;
    if (dim.is_real()) {
      entry["type"] = "real";
      entry["lower"] = dim.bounds().lower;
      entry["upper"] = dim.bounds().upper;
    } else {
      entry["type"] = "categorical";
      entry["values"] = dim.categories().values;
    }
    dims.push_back(std::move(entry));
  }
  njson conditions = njson::array();
  for (const ActivationClause& clause : description.conditions) {
    njson entry;
    entry["target"] = clause.target;
    entry["governor"] = clause.governor;
    entry["allowed"] = clause.allowed;
    conditions.push_back(std::move(entry));
  }
  njson root;
  root["dimensions"] = std::move(dims);
  root["conditions"] = std::move(conditions);
  return root.dump(2) + "\n";
}

SpacePtr read_space_file(const std::string& path) {
  return ParamSpace::validate(parse_space_json(read_text_file(path)));
}

namespace {

Config config_from_json(const njson& object, const std::string& context) {
  expect_object(object, context);
  Config config;
  for (const auto& item : object.items()) {
    const njson& value = item.value();
    if (value.is_number()) {
      config.set(item.key(), value.get<double>());
    } else if (value.is_string()) {
      config.set(item.key(), value.get<std::string>());
    } else {
      raise(Errc::ParseError,
            context + ": value for '" + item.key() + "' must be a number or a string");
    }
  }
  return config;
}

}  // namespace

Config parse_config_json(const std::string& text) {
  return config_from_json(parse_or_throw(text, "config file"), "config file");
}

std::vector<Config> parse_config_list_json(const std::string& text) {
  const njson root = parse_or_throw(text, "config list file");
  if (!root.is_array()) {
    raise(Errc::ParseError, "config list file must be a JSON array of objects");
  }
  std::vector<Config> out;
  out.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    out.push_back(config_from_json(root[i], "config " + std::to_string(i + 1)));
  }
  return out;
}

std::string config_to_json(const ParamSpace& space, const Config& config) {
  njson object = njson::object();
  for (const std::size_t i : space.topological_order()) {
    const Dimension& dim = space.dimension(i);
    const Config::Value* value = config.find(dim.id);
    if (value == nullptr) continue;
    if (const double* real = std::get_if<double>(value)) {
      object[dim.id] = *real;
    } else {
      object[dim.id] = std::get<std::string>(*value);
    }
  }
  return object.dump();
}

Config read_config_file(const std::string& path) {
  return parse_config_json(read_text_file(path));
}

std::vector<Config> read_config_list_file(const std::string& path) {
  return parse_config_list_json(read_text_file(path));
}

namespace {

BaseKernel base_kernel_from_json(const njson& object, const std::string& context) {
  expect_object(object, context);
  const std::string type = as_string(require_key(object, "type", context), context + " 'type'");
  if (type == "eq") {
    expect_keys(object, {"type", "sigma", "lambda"}, context);
    ExponentiatedQuadratic eq;
    if (object.contains("sigma")) eq.sigma = as_number(object["sigma"], context + " 'sigma'");
    if (object.contains("lambda")) eq.lambda = as_number(object["lambda"], context + " 'lambda'");
    return eq;
  }
  if (type == "rq") {
    expect_keys(object, {"type", "sigma", "lambda", "alpha"}, context);
    RationalQuadratic rq;
    if (object.contains("sigma")) rq.sigma = as_number(object["sigma"], context + " 'sigma'");
    if (object.contains("lambda")) rq.lambda = as_number(object["lambda"], context + " 'lambda'");
    if (object.contains("alpha")) rq.alpha = as_number(object["alpha"], context + " 'alpha'");
    return rq;
  }
  raise(Errc::ParseError, context + ": kernel type must be 'eq' or 'rq'");
}

void apply_dim_entry(DimKernel& dk, const njson& entry, const std::string& context) {
  expect_object(entry, context);
  expect_keys(entry, {"gamma", "rho", "kernel"}, context);
  if (entry.contains("gamma")) dk.gamma = as_number(entry["gamma"], context + " 'gamma'");
  if (entry.contains("rho")) dk.rho = as_number(entry["rho"], context + " 'rho'");
  if (entry.contains("kernel")) {
    dk.base = base_kernel_from_json(entry["kernel"], context + " 'kernel'");
  }
}

njson base_kernel_to_json(const BaseKernel& base) {
  njson object;
  if (const auto* eq = std::get_if<ExponentiatedQuadratic>(&base)) {
    object["type"] = "eq";
    object["sigma"] = eq->sigma;
    object["lambda"] = eq->lambda;
  } else {
    const auto& rq = std::get<RationalQuadratic>(base);
    object["type"] = "rq";
    object["sigma"] = rq.sigma;
    object["lambda"] = rq.lambda;
    object["alpha"] = rq.alpha;
  }
  return object;
}

}  // namespace

KernelSpec parse_kernel_spec_json(SpacePtr space, const std::string& text) {
  if (!space) raise(Errc::EmptyInput, "kernel file needs a space");
  const njson root = parse_or_throw(text, "kernel file");
  expect_object(root, "kernel file");
  expect_keys(root, {"combination", "default", "dimensions"}, "kernel file");

  const std::string combination_name =
      as_string(require_key(root, "combination", "kernel file"), "'combination'");
  Combination combination;
  if (combination_name == "sum") {
    combination = Combination::Sum;
  } else if (combination_name == "product") {
    combination = Combination::Product;
  } else {
    raise(Errc::ParseError, "kernel file: combination must be 'sum' or 'product'");
  }

  DimKernel fallback;
  if (root.contains("default")) {
    apply_dim_entry(fallback, root["default"], "kernel file 'default'");
  }

  std::map<std::string, DimKernel, std::less<>> per_dim;
  for (std::size_t i = 0; i < space->size(); ++i) {
    per_dim.emplace(space->dimension(i).id, fallback);
  }
  if (root.contains("dimensions")) {
    const njson& entries = root["dimensions"];
    expect_object(entries, "kernel file 'dimensions'");
    for (const auto& item : entries.items()) {
      const auto it = per_dim.find(item.key());
      if (it == per_dim.end()) {
        raise(Errc::UnknownDimension,
              "kernel file names unknown dimension '" + item.key() + "'");
      }
      apply_dim_entry(it->second, item.value(), "kernel entry '" + item.key() + "'");
    }
  }
  return KernelSpec::create(std::move(space), std::move(per_dim), combination);
}

std::string kernel_spec_to_json(const KernelSpec& spec) {
  njson entries = njson::object();
  for (const std::size_t i : spec.space().topological_order()) {
    const DimKernel& dk = spec.dim_kernel(i);
    njson entry;
    entry["gamma"] = dk.gamma;
    entry["rho"] = dk.rho;
    entry["kernel"] = base_kernel_to_json(dk.base);
    entries[spec.space().dimension(i).id] = std::move(entry);
  }
  njson root;
  root["combination"] = spec.combination() == Combination::Sum ? "sum" : "product";
  root["dimensions"] = std::move(entries);
  return root.dump(2) + "\n";
}

KernelSpec read_kernel_spec_file(SpacePtr space, const std::string& path) {
  return parse_kernel_spec_json(std::move(space), read_text_file(path));
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty() && !was_quoted) {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += c;
    }
  }
  if (in_quotes) {
    raise(Errc::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  if (value.find_first_of("\n\r") != std::string::npos) {
    raise(Errc::ParseError, "newlines are not supported in CSV fields");
  }
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Rows of cells with their original (1-based) line numbers; comment and
// blank lines skipped.
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') {
      if (start > text.size()) break;
      continue;
    }
    rows.emplace_back(line_no, split_csv_row(line, line_no));
    if (start > text.size()) break;
  }
  return rows;
}

double parse_number_cell(const std::string& cell, const std::string& context) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    raise(Errc::ParseError, context + ": '" + cell + "' is not a number");
  }
  return value;
}

}  // namespace

TableData parse_dataset_csv(const ParamSpace& space, const std::string& text) {
  const auto rows = csv_rows(text);
  if (rows.empty()) raise(Errc::ParseError, "data file has no header row");

  const std::vector<std::string>& header = rows.front().second;
  const bool has_y = !header.empty() && header.back() == "y";
  const std::size_t dim_cols = header.size() - (has_y ? 1 : 0);

  std::vector<std::size_t> col_to_dim(dim_cols);
  std::vector<bool> seen(space.size(), false);
  for (std::size_t c = 0; c < dim_cols; ++c) {
    const std::string& name = header[c];
    if (name == "y") raise(Errc::ParseError, "column 'y' must be the last column");
    if (!space.contains(name)) raise(Errc::ParseError, "unknown column '" + name + "'");
    const std::size_t index = space.index_of(name);
    if (seen[index]) raise(Errc::ParseError, "duplicate column '" + name + "'");
    seen[index] = true;
    col_to_dim[c] = index;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!seen[i]) {
      raise(Errc::ParseError, "missing column for dimension '" + space.dimension(i).id + "'");
    }
  }

  TableData out;
  std::vector<double> targets;
  std::size_t empty_targets = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t row_no = r;  // 1-based data row index
    const std::string row_label = "row " + std::to_string(row_no);
    const std::vector<std::string>& cells = rows[r].second;
    if (cells.size() != header.size()) {
      raise(Errc::ParseError, row_label + ": expected " + std::to_string(header.size()) +
                                  " cells, got " + std::to_string(cells.size()));
    }
    Config config;
    for (std::size_t c = 0; c < dim_cols; ++c) {
      const std::string& cell = cells[c];
      if (cell.empty()) continue;
      const Dimension& dim = space.dimension(col_to_dim[c]);
      if (dim.is_real()) {
        config.set(dim.id, parse_number_cell(cell, row_label + ", column '" + dim.id + "'"));
      } else {
        config.set(dim.id, cell);
      }
    }
    try {
      space.validate_config(config);
    } catch (const Error& e) {
      raise(e.code(), row_label + ": " + std::string(e.message()));
    }
    out.configs.push_back(std::move(config));
    if (has_y) {
      const std::string& cell = cells.back();
      if (cell.empty()) {
        ++empty_targets;
      } else {
        targets.push_back(parse_number_cell(cell, row_label + ", column 'y'"));
      }
    }
  }

  if (has_y && empty_targets > 0 && !targets.empty()) {
    raise(Errc::ParseError, "column 'y' mixes empty and filled cells");
  }
  if (has_y && !targets.empty()) {
    out.targets = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                                    static_cast<Eigen::Index>(targets.size()));
  }
  return out;
}

std::string dataset_to_csv(const ParamSpace& space, const std::vector<Config>& configs,
                           const Eigen::VectorXd* targets, const std::string& comment) {
  if (targets != nullptr &&
      static_cast<std::size_t>(targets->size()) != configs.size()) {
    raise(Errc::DimensionMismatch, "configs and targets differ in length");
  }
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";

  bool first = true;
  for (const std::size_t i : space.topological_order()) {
    if (!first) out += ',';
    out += csv_escape(space.dimension(i).id);
    first = false;
  }
  if (targets != nullptr) out += first ? "y" : ",y";
  out += '\n';

  for (std::size_t r = 0; r < configs.size(); ++r) {
    first = true;
    for (const std::size_t i : space.topological_order()) {
      if (!first) out += ',';
      first = false;
      const Config::Value* value = configs[r].find(space.dimension(i).id);
      if (value == nullptr) continue;
      if (const double* real = std::get_if<double>(value)) {
        out += format_double(*real);
      } else {
        out += csv_escape(std::get<std::string>(*value));
      }
    }
    if (targets != nullptr) {
      if (!first) out += ',';
      out += format_double((*targets)[static_cast<Eigen::Index>(r)]);
    }
    out += '\n';
  }
  return out;
}

TableData read_dataset_file(const ParamSpace& space, const std::string& path) {
  return parse_dataset_csv(space, read_text_file(path));
}

std::string matrix_to_csv(const Eigen::MatrixXd& matrix, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  const auto rows = csv_rows(text);
  if (rows.empty()) raise(Errc::ParseError, "matrix file has no rows");
  const std::size_t cols = rows.front().second.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::vector<std::string>& cells = rows[r].second;
    if (cells.size() != cols) {
      raise(Errc::ParseError, "line " + std::to_string(rows[r].first) + ": expected " +
                                  std::to_string(cols) + " cells, got " +
                                  std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_number_cell(cells[c], "line " + std::to_string(rows[r].first));
    }
  }
  return out;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  return parse_matrix_csv(read_text_file(path));
}

}  // namespace archk
