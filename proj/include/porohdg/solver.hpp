#pragma once

#include "porohdg/common.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace porohdg {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed row storage with sorted, duplicate-free column indices.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    /// Entry (i, j); zero when not stored.
    double coeff(int i, int j) const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd to_dense() const;
    /// FNV-1a over dimensions, pattern and values.
    std::uint64_t fingerprint() const;

private:
    friend SparseMatrix assemble(int, int, const std::vector<Triplet>&);
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Sums duplicates. Entries are added in input order, so the result is
/// deterministic for a given triplet sequence. Throws ValidationError on an
/// out-of-range index.
SparseMatrix assemble(int rows, int cols, const std::vector<Triplet>& triplets);

/// Sparse LU factors (UMFPACK, approximate-minimum-degree ordering).
class Factorization {
public:
    /// Throws ValidationError for a non-square matrix and NumericalError on a
    /// singular matrix, naming the column of the first zero pivot.
    explicit Factorization(const SparseMatrix& a);
    ~Factorization();
    Factorization(const Factorization&) = delete;
    Factorization& operator=(const Factorization&) = delete;

    int size() const { return n_; }
    std::uint64_t fingerprint() const { return fingerprint_; }
    std::size_t factor_nnz() const { return factor_nnz_; }

    /// Solves A x = b. Safe to call concurrently.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    int n_ = 0;
    std::uint64_t fingerprint_ = 0;
    std::size_t factor_nnz_ = 0;
    // Column-compressed copy of A, needed by the solve call.
    std::vector<int> col_ptr_;
    std::vector<int> row_idx_;
    std::vector<double> values_;
    void* numeric_ = nullptr;
};

}  // namespace porohdg
