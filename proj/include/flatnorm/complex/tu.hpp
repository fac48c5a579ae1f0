#pragma once

#include "flatnorm/complex/complex.hpp"

#include <vector>

namespace flatnorm {

struct TUVerdict {
    bool unimodular = true;
    std::size_t max_order = 0;
    std::size_t submatrices_checked = 0;
    // Offending submatrix when !unimodular.
    std::vector<std::size_t> rows, cols;
    std::int64_t det = 0;
};

std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m);

// Checks every square submatrix of order <= max_order. A submatrix whose
// row/column support graph is disconnected factors into blocks, so only
// connected supports are enumerated.
TUVerdict tu_verify(const BoundaryMatrix& m, std::size_t max_order = 6);
TUVerdict tu_verify(const std::vector<std::vector<std::int64_t>>& dense, std::size_t max_order = 6);

}  // namespace flatnorm
