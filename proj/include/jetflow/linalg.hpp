#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jetflow/scalar.hpp"

namespace jetflow {

// Dense row-major matrix over Scalar. Square instances play the role of the
// n x n matrices A, L, V acting on R^n.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, ScalarMode mode = ScalarMode::exact);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);
    static Matrix identity(std::size_t n, ScalarMode mode = ScalarMode::exact);
    static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    ScalarMode mode() const noexcept { return mode_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<Scalar>& entries() const noexcept { return a_; }

    bool is_zero() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Scalar& c);
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<Scalar> apply(std::span<const Scalar> v) const;
    Matrix to_mode(ScalarMode mode) const;
    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    ScalarMode mode_ = ScalarMode::exact;
    std::vector<Scalar> a_;
};

using RatMatrix = Matrix;

struct Echelon {
    Matrix reduced;                    // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

// Reduced row echelon form. Exact mode clears denominators row by row and runs
// fraction-free (Bareiss) elimination before the final back-substitution; float
// mode uses partial pivoting and treats |a| <= tol * max|A| as zero.
Echelon row_reduce(const Matrix& a, double tol = 1e-12);

std::size_t rank(const Matrix& a, double tol = 1e-12);

// Basis of {v : A v = 0}; one vector per free column, with that column set to 1.
std::vector<std::vector<Scalar>> nullspace(const Matrix& a, double tol = 1e-12);

enum class SolveStatus { unique, inconsistent, underdetermined };

struct SolveResult {
    SolveStatus status = SolveStatus::inconsistent;
    std::vector<Scalar> x;   // filled for unique (particular solution otherwise)
    std::vector<Scalar> residual;  // A x - b, or b's inconsistent part
};

SolveResult solve(const Matrix& a, std::span<const Scalar> b, double tol = 1e-12);

Scalar determinant(const Matrix& a);
Matrix inverse(const Matrix& a);

} // namespace jetflow
