#include "trilat/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "trilat/cvp.hpp"

namespace trilat {

namespace {

bool blank_or_comment(const std::string& line) {
  for (const char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      continue;
    }
    return c == '#';
  }
  return true;
}

}  // namespace

std::vector<Eigen::VectorXd> read_vectors(std::istream& in, const std::string& source) {
  std::vector<Eigen::VectorXd> vectors;
  std::string line;
  std::size_t line_number = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_number;
    if (blank_or_comment(line)) {
      continue;
    }
    values.clear();
    const char* cursor = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(cursor, &end);
      if (end == cursor) {
        throw ParseError(source, line_number,
                         "expected a decimal float at '" + std::string(cursor) + "'");
      }
      values.push_back(v);
      cursor = end;
      while (*cursor == ' ' || *cursor == '\t' || *cursor == '\r') {
        ++cursor;
      }
      if (*cursor == '\0') {
        break;
      }
      if (*cursor != ',') {
        throw ParseError(source, line_number,
                         "expected ',' between components, got '" +
                             std::string(1, *cursor) + "'");
      }
      ++cursor;
    }
    if (!vectors.empty() && static_cast<Eigen::Index>(values.size()) != vectors[0].size()) {
      throw ParseError(source, line_number,
                       "dimension " + std::to_string(values.size()) +
                           " differs from first vector's dimension " +
                           std::to_string(vectors[0].size()));
    }
    vectors.emplace_back(
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  return vectors;
}

std::vector<Eigen::VectorXd> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  return read_vectors(in, path);
}

void write_vectors(std::ostream& out, const std::vector<Eigen::VectorXd>& vectors) {
  char buf[64];
  for (const Eigen::VectorXd& v : vectors) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      if (i > 0) {
        out << ',';
      }
      out << buf;
    }
    out << '\n';
  }
}

std::size_t solve_stream(std::istream& in, std::ostream& out, Algo algorithm,
                         const std::string& source) {
  const std::vector<Eigen::VectorXd> targets = read_vectors(in, source);
  if (targets.empty()) {
    return 0;
  }
  const TriangularBasis<double> basis(targets[0].size());
  CvpWorkspace<double> ws;
  CvpSolution<double> sol;
  std::vector<Eigen::VectorXd> points;
  points.reserve(targets.size());
  for (const Eigen::VectorXd& y : targets) {
    switch (algorithm) {
      case Algo::cv:
        cv_baseline(basis, y, ws, sol);
        break;
      case Algo::qlin:
        qlin_cv(basis, y, ws, sol);
        break;
      case Algo::lin:
        lin_cv(basis, y, ws, sol);
        break;
    }
    points.push_back(sol.point);
  }
  write_vectors(out, points);
  return points.size();
}

std::size_t solve_file(const std::string& input_path, const std::string& output_path,
                       Algo algorithm) {
  std::ifstream in(input_path);
  if (!in) {
    throw std::runtime_error("cannot open '" + input_path + "' for reading");
  }
  std::ofstream out(output_path);
  if (!out) {
    throw std::runtime_error("cannot open '" + output_path + "' for writing");
  }
  return solve_stream(in, out, algorithm, input_path);
}

}  // namespace trilat
