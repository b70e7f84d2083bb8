#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdof/operator.hpp"
#include "kdof/spaces.hpp"

namespace kdof {

inline nlohmann::json norm_to_json(const NormSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  if (spec.weights.size() > 0) {
    std::vector<double> w(spec.weights.data(), spec.weights.data() + spec.weights.size());
    j["weights"] = w;
  }
  return j;
}

inline NormSpec norm_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("norm: expected object with \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  NormKind k;
  if (kind == "p1")
    k = NormKind::p1;
  else if (kind == "p2")
    k = NormKind::p2;
  else if (kind == "pinf")
    k = NormKind::pInf;
  else
    throw std::invalid_argument("norm: unknown kind \"" + kind + "\"");
  NormSpec spec = make_norm(k);
  if (j.contains("weights")) {
    std::vector<double> w = j.at("weights").get<std::vector<double>>();
    spec.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  return spec;
}

inline nlohmann::json operator_to_json(const Operator& t) {
  nlohmann::json j;
  j["rows"] = t.matrix.rows();
  j["cols"] = t.matrix.cols();
  std::vector<double> data;
  data.reserve(static_cast<size_t>(t.matrix.size()));
  for (int i = 0; i < t.matrix.rows(); ++i)
    for (int c = 0; c < t.matrix.cols(); ++c) data.push_back(t.matrix(i, c));
  j["data"] = data;
  j["domain_norm"] = norm_to_json(t.domain.norm);
  j["codomain_norm"] = norm_to_json(t.codomain.norm);
  return j;
}

inline Operator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("operator: expected JSON object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("operator: missing \"") + key + "\"");
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  if (rows < 1 || cols < 1) throw std::invalid_argument("operator: rows and cols must be >= 1");
  std::vector<double> data = j.at("data").get<std::vector<double>>();
  if (static_cast<long long>(data.size()) != 1LL * rows * cols)
    throw std::invalid_argument("operator: data length does not match rows*cols");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = data[static_cast<size_t>(i) * cols + c];
  NormSpec dn = j.contains("domain_norm") ? norm_from_json(j.at("domain_norm"))
                                          : make_norm(NormKind::p2);
  NormSpec cn = j.contains("codomain_norm") ? norm_from_json(j.at("codomain_norm"))
                                            : make_norm(NormKind::p2);
  return make_operator(std::move(m), std::move(dn), std::move(cn));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// temp file in the same directory, then rename; a failed run leaves nothing
inline void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

inline Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ": bad numeric cell \"" + cell + "\"");
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size())
        throw std::invalid_argument(path + ": bad numeric cell \"" + cell + "\"");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no data rows");
  Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) m(i, c) = rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
  return m;
}

inline Eigen::VectorXd load_vector(const std::string& path) {
  Eigen::MatrixXd m = load_matrix_csv(path);
  if (m.rows() != 1 && m.cols() != 1)
    throw std::invalid_argument(path + ": expected a single row or column of numbers");
  if (m.cols() == 1) return m.col(0);
  return m.row(0).transpose();
}

inline Operator load_operator_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return operator_from_json(j);
}

// JSON when the file parses as an object; otherwise CSV with norms from the
// caller (typically flags)
inline Operator load_operator(const std::string& path, std::optional<NormSpec> domain_norm = {},
                              std::optional<NormSpec> codomain_norm = {}) {
  const std::string text = read_text_file(path);
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Operator t = load_operator_json(path);
    if (domain_norm) {
      validate_norm_spec(*domain_norm, t.domain.dim, "domain norm");
      t.domain.norm = *domain_norm;
    }
    if (codomain_norm) {
      validate_norm_spec(*codomain_norm, t.codomain.dim, "codomain norm");
      t.codomain.norm = *codomain_norm;
    }
    return t;
  }
  Eigen::MatrixXd m = load_matrix_csv(path);
  return make_operator(std::move(m), domain_norm.value_or(make_norm(NormKind::p2)),
                       codomain_norm.value_or(make_norm(NormKind::p2)));
}

inline void save_operator_json(const Operator& t, const std::string& path) {
  atomic_write_text(path, operator_to_json(t).dump(2) + "\n");
}

}  // namespace kdof
