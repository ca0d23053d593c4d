#pragma once

#include <string>
#include <vector>

#include "linattn/types.hpp"

namespace linattn {

// Round-trip formatting (%.17g).
std::string format_double(double v);

// Row-major CSV, optional header line.
void write_matrix_csv(const std::string& path, const Matrix& M, const std::vector<std::string>& header = {});

Matrix read_matrix_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace linattn
