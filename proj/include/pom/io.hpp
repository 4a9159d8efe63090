#pragma once

// File formats for the CLI: JSON belief documents ({"mu", "sigma"} or
// {"mu", "cov"}, optional "labels"), JSON result files, and CSV output.
// All numeric text is locale-independent ('.' decimals via to_chars,
// shortest round-trip) and uses '\n' line endings.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pom/error.hpp"
#include "pom/types.hpp"

namespace pom::io {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct ParsedBelief {
  std::optional<IndependentGaussianBelief> independent;
  std::optional<FullGaussianBelief> full;
  std::vector<std::string> labels;
};

inline ParsedBelief read_belief_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw PomError(PomErrc::invalid_config, "cannot open belief file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw PomError(PomErrc::invalid_config,
                   "belief file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("mu") || !doc["mu"].is_array())
    throw PomError(PomErrc::invalid_config, "belief file needs a \"mu\" array");

  ParsedBelief out;
  std::vector<double> mu;
  try {
    mu = doc["mu"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw PomError(PomErrc::invalid_config, "\"mu\" must be numeric");
  }
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array())
      throw PomError(PomErrc::invalid_config, "\"labels\" must be an array");
    out.labels = doc["labels"].get<std::vector<std::string>>();
    if (out.labels.size() != mu.size())
      throw PomError(PomErrc::length_mismatch, "labels length mismatch");
  }

  if (doc.contains("sigma")) {
    std::vector<double> sigma;
    try {
      sigma = doc["sigma"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw PomError(PomErrc::invalid_config, "\"sigma\" must be numeric");
    }
    out.independent = IndependentGaussianBelief(std::move(mu), std::move(sigma));
    return out;
  }
  if (doc.contains("cov")) {
    const auto& cov_json = doc["cov"];
    if (!cov_json.is_array())
      throw PomError(PomErrc::invalid_config, "\"cov\" must be a matrix");
    const std::size_t n = mu.size();
    std::vector<double> cov;
    cov.reserve(n * n);
    if (cov_json.size() != n)
      throw PomError(PomErrc::length_mismatch, "cov must be |X| rows");
    for (const auto& row : cov_json) {
      if (!row.is_array() || row.size() != n)
        throw PomError(PomErrc::length_mismatch, "cov rows must have |X| entries");
      for (const auto& v : row) {
        if (!v.is_number())
          throw PomError(PomErrc::invalid_config, "cov entries must be numeric");
        cov.push_back(v.get<double>());
      }
    }
    out.full = FullGaussianBelief(std::move(mu), std::move(cov));
    return out;
  }
  throw PomError(PomErrc::invalid_config,
                 "belief file needs either \"sigma\" or \"cov\"");
}

struct ResultFile {
  std::string method;
  double epsilon = 0.0;
  std::vector<double> probs;
  std::optional<double> threshold;
  std::size_t iterations = 0;
  std::optional<double> max_error_bound;
  double entropy = 0.0;
  double wall_time_s = 0.0;
  std::optional<std::uint64_t> seed;
};

inline void write_result_file(const std::string& path, const ResultFile& r) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["method"] = r.method;
  doc["epsilon"] = r.epsilon;
  doc["probs"] = r.probs;
  if (r.threshold)
    doc["threshold"] = *r.threshold;
  else
    doc["threshold"] = nullptr;
  doc["iterations"] = r.iterations;
  if (r.max_error_bound)
    doc["max_error_bound"] = *r.max_error_bound;
  else
    doc["max_error_bound"] = nullptr;
  doc["entropy"] = r.entropy;
  doc["wall_time_s"] = r.wall_time_s;
  if (r.seed)
    doc["seed"] = *r.seed;
  else
    doc["seed"] = nullptr;
  std::ofstream outf(path);
  if (!outf)
    throw PomError(PomErrc::invalid_config, "cannot write result file " + path);
  outf << doc.dump(2) << "\n";
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_)
      throw PomError(PomErrc::invalid_config, "cannot write CSV file " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  return format_double(v);
}

}  // namespace pom::io
