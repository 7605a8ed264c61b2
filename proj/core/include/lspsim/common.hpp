// Shared base types: operator ids, 2-D points, a small dense matrix and
// the error hierarchy used across the library.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsp {

enum class Operator : int { A = 0, B = 1 };

constexpr int index_of(Operator op) { return static_cast<int>(op); }
constexpr Operator other(Operator op) {
    return op == Operator::A ? Operator::B : Operator::A;
}
constexpr char label(Operator op) { return op == Operator::A ? 'A' : 'B'; }

inline Operator operator_from_label(char c) {
    if (c == 'A' || c == 'a') return Operator::A;
    if (c == 'B' || c == 'b') return Operator::B;
    throw std::invalid_argument("unknown operator label");
}

constexpr Operator kOperators[2] = {Operator::A, Operator::B};

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Row-major dense matrix of doubles. Deliberately minimal; the link-rate
// and weight matrices in this project are tiny (tens of entries).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct InvalidParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Query against a state that cannot answer it, e.g. the SINR of a carrier
// the operator is not transmitting on.
struct InvalidQueryError : std::logic_error {
    using std::logic_error::logic_error;
};

// A proportional-fair utility is undefined when some user has zero sum rate.
struct InfeasibleUtilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyStoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lsp
