#pragma once

#include <stdexcept>
#include <string>

namespace teinv {

// Incompatible tensor shapes (wrong extents, bad contraction axes, size
// mismatches between a matrix and a target shape).
class shape_error : public std::invalid_argument {
public:
    explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid entry data: non-finite values, entry counts that do not match the
// shape, malformed documents.
class value_error : public std::invalid_argument {
public:
    explicit value_error(const std::string& what) : std::invalid_argument(what) {}
};

// A square system could not be inverted; carries the reciprocal condition
// estimate of the offending matrix.
class singular_error : public std::runtime_error {
public:
    singular_error(const std::string& what, double rcond_estimate)
        : std::runtime_error(what), rcond(rcond_estimate) {}
    double rcond;
};

// A mathematical precondition of a construction is not met (rank equalities
// for prescribed-range/null-space inverses, outer-inverse requirement of the
// perturbation entry points).
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace teinv
