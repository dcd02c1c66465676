#pragma once

#include <string>

#include "ossfield/matlin.hpp"

namespace ossf {
namespace csvio {

// One row per line, comma-separated, >= 15 significant digits on write.
Matrix read_matrix(const std::string& csv_text);
Matrix read_matrix_file(const std::string& path);
std::string write_matrix(const Matrix& m);
void write_matrix_file(const Matrix& m, const std::string& path);

// Command-line literal: rows separated by ';', entries by ','.
// "1,0;0,1" is the 2x2 identity; "3,4" is a 1x2 row (use as a vector).
Matrix parse_literal(const std::string& text);

}  // namespace csvio
}  // namespace ossf
