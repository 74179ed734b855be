#include "psa/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace psa::io {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             std::size_t column, const std::string& what) {
  throw ValidationError(path + ":" + std::to_string(line) + ":" +
                        std::to_string(column) + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& path, std::size_t line, std::size_t col,
                    const std::string& tok) {
  double v = 0.0;
  const auto* begin = tok.data();
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || p != end)
    parse_fail(path, line, col, "expected a number, got '" + tok + "'");
  return v;
}

struct CsvMatrix {
  std::vector<std::string> header;
  Matrix values;
};

CsvMatrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, 1, "empty file");
  CsvMatrix out;
  out.header = split_csv_line(line);
  const std::size_t k = out.header.size();

  std::vector<double> data;
  std::size_t rows = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto toks = split_csv_line(line);
    if (toks.size() != k)
      parse_fail(path, lineno, 1,
                 "expected " + std::to_string(k) + " columns, got " +
                     std::to_string(toks.size()));
    for (std::size_t c = 0; c < k; ++c)
      data.push_back(parse_double(path, lineno, c + 1, toks[c]));
    ++rows;
  }
  if (rows == 0) parse_fail(path, lineno, 1, "no data rows");
  out.values = Matrix(rows, k, std::move(data));
  return out;
}

bool header_has_prefix(const std::vector<std::string>& header, const std::string& prefix) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != prefix + std::to_string(i)) return false;
  return true;
}

void write_csv_matrix(const std::string& path, const Matrix& m,
                      const std::string& prefix) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot open file for writing");
  for (std::size_t c = 0; c < m.cols(); ++c)
    out << (c ? "," : "") << prefix << c;
  out << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

std::vector<double> json_vector(const json& j, const std::string& path,
                                const std::string& key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(path + ": missing array field '" + key + "'");
  std::vector<double> v;
  for (const auto& x : j[key]) {
    if (!x.is_number())
      throw ValidationError(path + ": non-numeric entry in '" + key + "'");
    v.push_back(x.get<double>());
  }
  return v;
}

void check_k(const json& j, const std::string& path, std::size_t len) {
  if (j.contains("K") && j["K"].get<std::size_t>() != len)
    throw ValidationError(path + ": declared K does not match vector length");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

PredictionMatrix read_predictions_csv(const std::string& path) {
  auto csv = read_csv_matrix(path);
  if (!header_has_prefix(csv.header, "p_"))
    parse_fail(path, 1, 1, "expected header p_0..p_{K-1}");
  return PredictionMatrix(std::move(csv.values));
}

LogitMatrix read_logits_csv(const std::string& path) {
  auto csv = read_csv_matrix(path);
  if (!header_has_prefix(csv.header, "z_"))
    parse_fail(path, 1, 1, "expected header z_0..z_{K-1}");
  return LogitMatrix(std::move(csv.values));
}

LoadedPredictions read_predictions_any(const std::string& path) {
  auto csv = read_csv_matrix(path);
  LoadedPredictions out;
  if (header_has_prefix(csv.header, "p_")) {
    out.preds = PredictionMatrix(std::move(csv.values));
  } else if (header_has_prefix(csv.header, "z_")) {
    out.logits = LogitMatrix(std::move(csv.values));
  } else {
    parse_fail(path, 1, 1, "expected header p_0..p_{K-1} or z_0..z_{K-1}");
  }
  return out;
}

std::vector<int> read_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, 1, "empty file");
  if (split_csv_line(line) != std::vector<std::string>{"y"})
    parse_fail(path, 1, 1, "expected header 'y'");
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int v = 0;
    const auto* begin = line.data();
    const auto* end = line.data() + line.size();
    while (end > begin && (end[-1] == '\r')) --end;
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
      parse_fail(path, lineno, 1, "expected an integer label");
    labels.push_back(v);
  }
  if (labels.empty()) parse_fail(path, lineno, 1, "no data rows");
  return labels;
}

void write_predictions_csv(const std::string& path, const PredictionMatrix& m) {
  write_csv_matrix(path, m.matrix(), "p_");
}

void write_logits_csv(const std::string& path, const LogitMatrix& m) {
  write_csv_matrix(path, m.matrix(), "z_");
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot open file for writing");
  out << "y\n";
  for (int y : labels) out << y << "\n";
}

PriorsOrWeights read_priors_json(const std::string& path) {
  const json j = read_json_file(path);
  PriorsOrWeights out;
  if (j.contains("priors")) {
    out.priors = json_vector(j, path, "priors");
    check_k(j, path, out.priors->size());
  } else if (j.contains("weights")) {
    out.weights = json_vector(j, path, "weights");
    check_k(j, path, out.weights->size());
  } else {
    throw ValidationError(path + ": expected a 'priors' or 'weights' field");
  }
  return out;
}

void write_priors_json(const std::string& path, const std::vector<double>& priors) {
  write_json_file(path, json{{"K", priors.size()}, {"priors", priors}});
}

void write_weights_json(const std::string& path, const std::vector<double>& weights) {
  write_json_file(path, json{{"K", weights.size()}, {"weights", weights}});
}

CalibrationParams read_calibration_json(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.contains("temperature") || !j["temperature"].is_number())
    throw ValidationError(path + ": missing numeric 'temperature'");
  CalibrationParams params;
  params.temperature = j["temperature"].get<double>();
  params.biases = json_vector(j, path, "biases");
  check_k(j, path, params.biases.size());
  params.validate();
  return params;
}

void write_calibration_json(const std::string& path, const CalibrationParams& params) {
  write_json_file(path, json{{"K", params.biases.size()},
                             {"temperature", params.temperature},
                             {"biases", params.biases}});
}

std::string report_to_json(const EstimationReport& report, bool is_ratio) {
  json j;
  j["method"] = report.method;
  j[is_ratio ? "weights" : "priors"] = report.values;
  if (!is_ratio) {
    bool inside = true;
    for (double x : report.values) inside = inside && x >= 0.0;
    j["inside_simplex"] = inside;
  }
  json trace = json::array();
  for (const auto& [iter, obj] : report.trace)
    trace.push_back(json::array({iter, obj}));
  j["trace"] = std::move(trace);
  j["termination"] =
      report.termination == Termination::converged ? "converged" : "max_iters";
  j["wall_seconds"] = report.wall_seconds;
  return j.dump(2);
}

void write_report_json(const std::string& path, const EstimationReport& report,
                       bool is_ratio) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot open file for writing");
  out << report_to_json(report, is_ratio) << "\n";
}

}  // namespace psa::io
