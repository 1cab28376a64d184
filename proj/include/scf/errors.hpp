#ifndef SCF_ERRORS_HPP
#define SCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scf {

// Bad arguments or configuration detected before any real work starts.
// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data, infeasible problem instances, corrupt model files.
// The CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Determinant pivot collapsed below the singularity threshold. Carries the
// column that triggered it so callers can report or apply the edge-direction
// heuristic and retry.
struct SingularMatrixError : DataError {
    int column;
    double pivot;
    SingularMatrixError(int col, double piv)
        : DataError("weight matrix numerically singular at column " + std::to_string(col) +
                    " (pivot " + std::to_string(piv) + "); near-symmetric edge weights suspected"),
          column(col),
          pivot(piv) {}
};

}  // namespace scf

#endif
