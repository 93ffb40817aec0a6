#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trilat/bench.hpp"

namespace trilat {

struct ParseError : std::runtime_error {
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  std::size_t line_number;
};

/// Vector file format: one vector per line, components as decimal floats
/// separated by single commas. Blank lines are ignored; '#' begins a comment
/// line. All vectors in a file must share one dimension.
std::vector<Eigen::VectorXd> read_vectors(std::istream& in,
                                          const std::string& source = "<stream>");
std::vector<Eigen::VectorXd> read_vector_file(const std::string& path);

void write_vectors(std::ostream& out, const std::vector<Eigen::VectorXd>& vectors);

/// Solves every vector in `in` with the chosen algorithm and writes the
/// closest lattice points to `out`, one per input line in input order.
/// Returns the number of vectors solved.
std::size_t solve_stream(std::istream& in, std::ostream& out, Algo algorithm,
                         const std::string& source = "<stream>");
std::size_t solve_file(const std::string& input_path, const std::string& output_path,
                       Algo algorithm);

}  // namespace trilat
