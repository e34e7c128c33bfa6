#include "porohdg/solver.hpp"

#include <suitesparse/umfpack.h>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string>

namespace porohdg {

double SparseMatrix::coeff(int i, int j) const
{
    const auto b = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto e = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const
{
    if (x.size() != cols_) throw ValidationError("sparse multiply: dimension mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int p = row_ptr_[static_cast<std::size_t>(i)]; p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
            s += values_[static_cast<std::size_t>(p)] * x[col_idx_[static_cast<std::size_t>(p)]];
        }
        y[i] = s;
    }
    return y;
}

Eigen::MatrixXd SparseMatrix::to_dense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[static_cast<std::size_t>(i)]; p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
            d(i, col_idx_[static_cast<std::size_t>(p)]) = values_[static_cast<std::size_t>(p)];
        }
    }
    return d;
}

std::uint64_t SparseMatrix::fingerprint() const
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    mix(&rows_, sizeof rows_);
    mix(&cols_, sizeof cols_);
    mix(row_ptr_.data(), row_ptr_.size() * sizeof(int));
    mix(col_idx_.data(), col_idx_.size() * sizeof(int));
    mix(values_.data(), values_.size() * sizeof(double));
    return h;
}

SparseMatrix assemble(int rows, int cols, const std::vector<Triplet>& triplets)
{
    if (rows < 0 || cols < 0) throw ValidationError("assemble: negative dimension");
    SparseMatrix a(rows, cols);
    std::vector<int> count(static_cast<std::size_t>(rows) + 1, 0);
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw ValidationError("assemble: index (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        ++count[static_cast<std::size_t>(t.row) + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());

    // Stable bucket by row keeps input order within each row.
    std::vector<int> cols_tmp(triplets.size());
    std::vector<double> vals_tmp(triplets.size());
    std::vector<int> next(count.begin(), count.end() - 1);
    for (const auto& t : triplets) {
        const auto pos = static_cast<std::size_t>(next[static_cast<std::size_t>(t.row)]++);
        cols_tmp[pos] = t.col;
        vals_tmp[pos] = t.value;
    }

    a.col_idx_.reserve(triplets.size());
    a.values_.reserve(triplets.size());
    std::vector<std::size_t> order;
    for (int i = 0; i < rows; ++i) {
        const auto b = static_cast<std::size_t>(count[static_cast<std::size_t>(i)]);
        const auto e = static_cast<std::size_t>(count[static_cast<std::size_t>(i) + 1]);
        order.resize(e - b);
        std::iota(order.begin(), order.end(), b);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cols_tmp[x] < cols_tmp[y]; });
        for (std::size_t q = 0; q < order.size(); ++q) {
            const int c = cols_tmp[order[q]];
            if (q > 0 && c == a.col_idx_.back()) {
                a.values_.back() += vals_tmp[order[q]];
            } else {
                a.col_idx_.push_back(c);
                a.values_.push_back(vals_tmp[order[q]]);
            }
        }
        a.row_ptr_[static_cast<std::size_t>(i) + 1] = static_cast<int>(a.col_idx_.size());
    }
    a.col_idx_.shrink_to_fit();
    a.values_.shrink_to_fit();
    return a;
}

namespace {

std::string umfpack_status(int status)
{
    switch (status) {
    case UMFPACK_ERROR_out_of_memory: return "out of memory";
    case UMFPACK_ERROR_invalid_matrix: return "invalid matrix";
    case UMFPACK_WARNING_singular_matrix: return "singular matrix";
    default: return "status " + std::to_string(status);
    }
}

}  // namespace

Factorization::Factorization(const SparseMatrix& a)
{
    if (a.rows() != a.cols()) throw ValidationError("factorize: matrix is not square");
    n_ = a.rows();
    fingerprint_ = a.fingerprint();

    // CSR -> CSC.
    const auto nnz = a.nnz();
    col_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    row_idx_.resize(nnz);
    values_.resize(nnz);
    for (int c : a.col_idx()) ++col_ptr_[static_cast<std::size_t>(c) + 1];
    std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());
    std::vector<int> next(col_ptr_.begin(), col_ptr_.end() - 1);
    for (int i = 0; i < n_; ++i) {
        for (int p = a.row_ptr()[static_cast<std::size_t>(i)]; p < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const int c = a.col_idx()[static_cast<std::size_t>(p)];
            const auto pos = static_cast<std::size_t>(next[static_cast<std::size_t>(c)]++);
            row_idx_[pos] = i;
            values_[pos] = a.values()[static_cast<std::size_t>(p)];
        }
    }
    if (n_ == 0) return;

    double control[UMFPACK_CONTROL];
    double info[UMFPACK_INFO];
    umfpack_di_defaults(control);
    void* symbolic = nullptr;
    int status = umfpack_di_symbolic(n_, n_, col_ptr_.data(), row_idx_.data(), values_.data(), &symbolic, control, info);
    if (status != UMFPACK_OK) {
        umfpack_di_free_symbolic(&symbolic);
        throw NumericalError("factorize: symbolic analysis failed (" + umfpack_status(status) + ")");
    }
    status = umfpack_di_numeric(col_ptr_.data(), row_idx_.data(), values_.data(), symbolic, &numeric_, control, info);
    umfpack_di_free_symbolic(&symbolic);
    if (status == UMFPACK_WARNING_singular_matrix) {
        // Locate the first zero pivot in original column numbering.
        std::vector<double> udiag(static_cast<std::size_t>(n_));
        std::vector<int> q(static_cast<std::size_t>(n_));
        int do_recip = 0;
        umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, q.data(), udiag.data(),
                               &do_recip, nullptr, numeric_);
        int column = -1;
        for (int k = 0; k < n_; ++k) {
            if (udiag[static_cast<std::size_t>(k)] == 0.0) {
                column = q[static_cast<std::size_t>(k)];
                break;
            }
        }
        umfpack_di_free_numeric(&numeric_);
        throw NumericalError("factorize: matrix is singular (zero pivot at column " + std::to_string(column) + ")");
    }
    if (status != UMFPACK_OK) {
        umfpack_di_free_numeric(&numeric_);
        throw NumericalError("factorize: numeric factorization failed (" + umfpack_status(status) + ")");
    }
    int lnz = 0, unz = 0, nr = 0, nc = 0, nz_udiag = 0;
    umfpack_di_get_lunz(&lnz, &unz, &nr, &nc, &nz_udiag, numeric_);
    factor_nnz_ = static_cast<std::size_t>(lnz) + static_cast<std::size_t>(unz);
}

Factorization::~Factorization()
{
    if (numeric_ != nullptr) umfpack_di_free_numeric(&numeric_);
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const
{
    if (b.size() != n_) {
        throw ValidationError("solve: rhs has size " + std::to_string(b.size()) + ", expected " + std::to_string(n_));
    }
    Eigen::VectorXd x(n_);
    if (n_ == 0) return x;
    double control[UMFPACK_CONTROL];
    double info[UMFPACK_INFO];
    umfpack_di_defaults(control);
    const int status = umfpack_di_solve(UMFPACK_A, col_ptr_.data(), row_idx_.data(), values_.data(), x.data(), b.data(),
                                        numeric_, control, info);
    if (status != UMFPACK_OK) throw NumericalError("solve: " + umfpack_status(status));
    if (!x.allFinite()) throw NumericalError("solve: non-finite solution");
    return x;
}

}  // namespace porohdg
