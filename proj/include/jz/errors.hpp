#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jz {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : Error {
    using Error::Error;
};

struct AlgebraMismatch : Error {
    using Error::Error;
};

struct InvariantViolation : Error {
    using Error::Error;
};

struct SingularityError : Error {
    double abs_det;
    SingularityError(const std::string& what, double abs_det_)
        : Error(what), abs_det(abs_det_) {}
};

struct ChartDomainError : Error {
    int index;  // first failing minor / coordinate, 1-based
    ChartDomainError(const std::string& what, int index_)
        : Error(what), index(index_) {}
};

struct SolverError : Error {
    double residual;
    SolverError(const std::string& what, double residual_)
        : Error(what), residual(residual_) {}
};

struct BudgetError : Error {
    double partial_value;
    double partial_error;
    BudgetError(const std::string& what, double value, double err)
        : Error(what), partial_value(value), partial_error(err) {}
};

struct PoleError : Error {
    std::vector<int> factors;  // 1-based Gamma factor indices
    PoleError(const std::string& what, std::vector<int> f)
        : Error(what), factors(std::move(f)) {}
};

struct GeometryError : Error {
    using Error::Error;
};

struct IndeterminateOrderError : Error {
    using Error::Error;
};

struct UnsupportedPointError : Error {
    using Error::Error;
};

struct ConditioningError : Error {
    double condition;
    ConditioningError(const std::string& what, double cond)
        : Error(what), condition(cond) {}
};

}  // namespace jz
