#include "jetflow/linalg.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace jetflow {

Matrix::Matrix(std::size_t rows, std::size_t cols, ScalarMode mode)
    : rows_(rows), cols_(cols), mode_(mode), a_(rows * cols, Scalar::zero(mode)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows * cols) throw Error(ErrorKind::DimensionMismatch, "matrix entry count mismatch");
    mode_ = a_.empty() ? ScalarMode::exact : a_.front().mode();
    for (const auto& e : a_)
        if (e.mode() != mode_) throw Error(ErrorKind::ModeMismatch, "matrix entries mix scalar modes");
}

Matrix Matrix::identity(std::size_t n, ScalarMode mode) {
    Matrix m(n, n, mode);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(mode);
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty()) return {};
    std::vector<Scalar> e;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
        e.insert(e.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), rows.front().size(), std::move(e));
}

bool Matrix::is_zero() const {
    for (const auto& e : a_)
        if (!e.is_zero()) return false;
    return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_, a.mode_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) r(i, j).add_product(a(i, k), b(k, j));
        }
    return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix shape mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix shape mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
    return r;
}

Matrix operator*(const Matrix& a, const Scalar& c) {
    Matrix r = a;
    for (auto& e : r.a_) e *= c;
    return r;
}

std::vector<Scalar> Matrix::apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "vector length mismatch");
    std::vector<Scalar> r(rows_, Scalar::zero(mode_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i].add_product((*this)(i, j), v[j]);
    return r;
}

Matrix Matrix::to_mode(ScalarMode mode) const {
    std::vector<Scalar> e;
    for (const auto& x : a_) e.push_back(x.to_mode(mode));
    Matrix r(rows_, cols_, std::move(e));
    r.mode_ = mode;
    return r;
}

std::string Matrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) os << "; ";
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    }
    return os.str();
}

namespace {

// Integer matrix with each row of `a` scaled by the lcm of its denominators.
std::vector<std::vector<mpz_class>> integer_rows(const Matrix& a) {
    std::vector<std::vector<mpz_class>> m(a.rows(), std::vector<mpz_class>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < a.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).rational_value().get_den_mpz_t());
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const mpq_class& q = a(i, j).rational_value();
            m[i][j] = q.get_num() * (l / q.get_den());
        }
    }
    return m;
}

// Fraction-free forward elimination; returns pivot columns and the sign of the row permutation.
std::pair<std::vector<std::size_t>, int> bareiss(std::vector<std::vector<mpz_class>>& m) {
    const std::size_t rows = m.size(), cols = rows ? m.front().size() : 0;
    std::vector<std::size_t> pivots;
    mpz_class prev = 1;
    int sign = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(m[p][c]) == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            std::swap(m[p], m[r]);
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivots.push_back(c);
        ++r;
    }
    return {pivots, sign};
}

Echelon reduce_exact(const Matrix& a) {
    auto m = integer_rows(a);
    auto [pivots, sign] = bareiss(m);
    Matrix red(a.rows(), a.cols(), ScalarMode::exact);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        mpq_class inv(mpz_class(1), m[i][pivots[i]]);
        inv.canonicalize();
        for (std::size_t j = 0; j < a.cols(); ++j) red(i, j) = Scalar(mpq_class(m[i][j] * inv));
    }
    for (std::size_t k = pivots.size(); k-- > 0;) {
        const std::size_t pc = pivots[k];
        for (std::size_t i = 0; i < k; ++i) {
            Scalar f = red(i, pc);
            if (f.is_zero()) continue;
            for (std::size_t j = pc; j < a.cols(); ++j) red(i, j) -= f * red(k, j);
        }
    }
    return {std::move(red), std::move(pivots)};
}

Echelon reduce_float(const Matrix& a, double tol) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    double scale = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            m[i][j] = a(i, j).to_double();
            scale = std::max(scale, std::abs(m[i][j]));
        }
    const double eps = tol * (scale > 0 ? scale : 1.0);
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
        if (std::abs(m[p][c]) <= eps) {
            for (std::size_t i = r; i < rows; ++i) m[i][c] = 0;
            continue;
        }
        std::swap(m[p], m[r]);
        const double piv = m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const double f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    Matrix red(rows, cols, ScalarMode::floating);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) red(i, j) = Scalar(i < r ? m[i][j] : 0.0);
    return {std::move(red), std::move(pivots)};
}

} // namespace

Echelon row_reduce(const Matrix& a, double tol) {
    return a.mode() == ScalarMode::exact ? reduce_exact(a) : reduce_float(a, tol);
}

std::size_t rank(const Matrix& a, double tol) { return row_reduce(a, tol).pivots.size(); }

std::vector<std::vector<Scalar>> nullspace(const Matrix& a, double tol) {
    const auto e = row_reduce(a, tol);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(a.cols(), Scalar::zero(a.mode()));
        v[free] = Scalar::one(a.mode());
        for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.reduced(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

SolveResult solve(const Matrix& a, std::span<const Scalar> b, double tol) {
    if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side length mismatch");
    Matrix aug(a.rows(), a.cols() + 1, a.mode());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    const auto e = row_reduce(aug, tol);
    SolveResult res;
    res.x.assign(a.cols(), Scalar::zero(a.mode()));
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) {
        res.status = SolveStatus::inconsistent;
        res.residual = std::vector<Scalar>(b.begin(), b.end());
        return res;
    }
    for (std::size_t k = 0; k < e.pivots.size(); ++k) res.x[e.pivots[k]] = e.reduced(k, a.cols());
    res.status = e.pivots.size() == a.cols() ? SolveStatus::unique : SolveStatus::underdetermined;
    res.residual = a.apply(res.x);
    for (std::size_t i = 0; i < b.size(); ++i) res.residual[i] -= b[i];
    return res;
}

Scalar determinant(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return Scalar::one(a.mode());
    if (a.mode() == ScalarMode::exact) {
        auto m = integer_rows(a);
        mpz_class scale = 1;
        for (std::size_t i = 0; i < n; ++i) {
            mpz_class l = 1;
            for (std::size_t j = 0; j < n; ++j)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).rational_value().get_den_mpz_t());
            scale *= l;
        }
        auto [pivots, sign] = bareiss(m);
        if (pivots.size() < n) return Scalar(0);
        mpq_class d(m[n - 1][n - 1] * sign, scale);
        d.canonicalize();
        return Scalar(d);
    }
    // Float: LU with partial pivoting.
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j).to_double();
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
        if (m[p][c] == 0) return Scalar(0.0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return Scalar(det);
}

Matrix inverse(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    const std::size_t n = a.rows();
    Matrix aug(n, 2 * n, a.mode());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = Scalar::one(a.mode());
    }
    const auto e = row_reduce(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
        throw Error(ErrorKind::InvalidArgument, "matrix is singular");
    Matrix inv(n, n, a.mode());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

} // namespace jetflow
