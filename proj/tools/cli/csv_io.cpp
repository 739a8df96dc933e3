#include "cli/csv_io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torograph/angle.hpp"

namespace torograph::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const auto begin = field.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      fields.emplace_back();
    } else {
      const auto end = field.find_last_not_of(" \t\r");
      fields.push_back(field.substr(begin, end - begin + 1));
    }
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t row,
                    const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw parse_error("non-numeric cell at row " + std::to_string(row) +
                      ", column " + column);
  }
  return value;
}

}  // namespace

AngleMatrix ingest_csv(const std::string& path, AngleUnit unit) {
  std::ifstream file(path);
  if (!file) throw parse_error("cannot open input file '" + path + "'");

  std::string line;
  if (!std::getline(file, line)) throw parse_error("empty file '" + path + "'");
  const std::vector<std::string> names = split_fields(line);
  if (names.empty()) throw parse_error("missing header row in '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;  // header is row 1
  while (std::getline(file, line)) {
    ++row_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != names.size()) {
      const std::size_t hint = std::min(fields.size(), names.size());
      throw parse_error("ragged row " + std::to_string(row_number) + " (" +
                        std::to_string(fields.size()) + " cells, expected " +
                        std::to_string(names.size()) + ") near column " +
                        names[hint == names.size() ? hint - 1 : hint]);
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row[c] = parse_number(fields[c], row_number, names[c]);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("no data rows in '" + path + "'");

  Eigen::MatrixXd values(rows.size(), names.size());
  const double scale = unit == AngleUnit::degrees ? kPi / 180.0 : 1.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c] * scale;
    }
  }
  try {
    return AngleMatrix(std::move(values), names);
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string(e.what()) + " in '" + path + "'");
  }
}

namespace {

std::string format_value(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

void write_angles_csv(const std::string& path, const AngleMatrix& data,
                      AngleUnit unit) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    out << (j ? "," : "") << data.column_names()[j];
  }
  out << "\n";
  const double scale = unit == AngleUnit::degrees ? 180.0 / kPi : 1.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      out << (j ? "," : "") << format_value(data(i, j) * scale);
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw parse_error("cannot open matrix file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row_number = 0;
  while (std::getline(file, line)) {
    ++row_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(parse_number(fields[c], row_number, std::to_string(c + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw parse_error("ragged row " + std::to_string(row_number) + " in '" +
                        path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("empty matrix file '" + path + "'");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows.front().size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_winding_csv(const std::string& path, const Eigen::MatrixXi& windings,
                       const std::vector<std::string>& names) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < windings.cols(); ++j) {
    out << (j ? "," : "") << "k_" << names[j];
  }
  out << "\n";
  for (Eigen::Index i = 0; i < windings.rows(); ++i) {
    for (Eigen::Index j = 0; j < windings.cols(); ++j) {
      out << (j ? "," : "") << windings(i, j);
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

bool export_ramachandran(const AngleMatrix& data,
                         const std::vector<std::pair<std::string, std::string>>& pairs,
                         const std::string& path) {
  if (pairs.empty()) return false;
  std::ostringstream out;
  bool first = true;
  for (const auto& [phi, psi] : pairs) {
    data.column_index(phi);  // validates names
    data.column_index(psi);
    out << (first ? "" : ",") << phi << "," << psi;
    first = false;
  }
  out << "\n";
  const double scale = 180.0 / kPi;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    first = true;
    for (const auto& [phi, psi] : pairs) {
      out << (first ? "" : ",") << format_value(data(i, data.column_index(phi)) * scale)
          << "," << format_value(data(i, data.column_index(psi)) * scale);
      first = false;
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
  return true;
}

std::vector<std::pair<std::string, std::string>> resolve_pairs(
    const std::string& spec, const std::vector<std::string>& columns) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!spec.empty()) {
    std::istringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("--pairs expects name:name entries, got '" +
                                    item + "'");
      }
      pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    return pairs;
  }
  // Convention-based matching: phi<k> with psi<k>.
  for (const auto& name : columns) {
    if (name.rfind("phi", 0) != 0) continue;
    const std::string suffix = name.substr(3);
    const std::string partner = "psi" + suffix;
    for (const auto& other : columns) {
      if (other == partner) {
        pairs.emplace_back(name, partner);
        break;
      }
    }
  }
  return pairs;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write to '" + tmp.string() + "'");
    }
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace torograph::cli
