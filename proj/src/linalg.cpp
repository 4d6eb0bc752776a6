#include "qrf/linalg.hpp"

#include "qrf/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

namespace qrf {

namespace {

std::atomic<long long>& guard_storage() {
    static std::atomic<long long> guard = [] {
        if (const char* env = std::getenv("QRF_MAX_DIM")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end != env && v > 0) return v;
        }
        return 1LL << 20;
    }();
    return guard;
}

void check_alloc(long rows, long cols) {
    if (rows < 0 || cols < 0) fail(ErrorKind::Dimension, "negative matrix dimension");
    long long total = static_cast<long long>(rows) * static_cast<long long>(cols);
    if (total > max_matrix_entries())
        fail(ErrorKind::Size, "matrix of " + std::to_string(total) +
                                  " entries exceeds the dimension guard of " +
                                  std::to_string(max_matrix_entries()) + " (QRF_MAX_DIM)");
}

using EigenMap =
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

} // namespace

long long max_matrix_entries() { return guard_storage().load(); }

void set_max_matrix_entries(long long n) {
    if (n < 1) fail(ErrorKind::Validation, "dimension guard must be positive");
    guard_storage().store(n);
}

ComplexMatrix::ComplexMatrix(long rows, long cols) : rows_(rows), cols_(cols) {
    check_alloc(rows, cols);
    data_.assign(static_cast<size_t>(rows) * cols, cplx{0.0, 0.0});
}

ComplexMatrix::ComplexMatrix(long rows, long cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_alloc(rows, cols);
    if (data_.size() != static_cast<size_t>(rows) * cols)
        fail(ErrorKind::Dimension, "entry count does not match rows*cols");
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            fail(ErrorKind::Validation, "non-finite matrix entry");
}

ComplexMatrix ComplexMatrix::identity(long n) {
    ComplexMatrix m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(static_cast<long>(d.size()), static_cast<long>(d.size()));
    for (long i = 0; i < m.rows(); ++i) m.at(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(std::vector<cplx> v) {
    long n = static_cast<long>(v.size());
    return ComplexMatrix(n, 1, std::move(v));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (long r = 0; r < rows_; ++r)
        for (long c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::Dimension, "shape mismatch in add");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::Dimension, "shape mismatch in sub");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::Dimension, "shape mismatch in matrix product");
    ComplexMatrix out(a.rows(), b.cols());
    const long n = a.rows(), k = a.cols(), m = b.cols();
    for (long i = 0; i < n; ++i) {
        cplx* outrow = out.data() + static_cast<size_t>(i) * m;
        for (long p = 0; p < k; ++p) {
            const cplx aip = a.at(i, p);
            if (aip == cplx{0.0, 0.0}) continue;
            const cplx* brow = b.data() + static_cast<size_t>(p) * m;
            for (long j = 0; j < m; ++j) outrow[j] += aip * brow[j];
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) fail(ErrorKind::Dimension, "trace of non-square matrix");
    cplx t = 0.0;
    for (long i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::norm_max() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::norm_fro() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_alloc(a.rows() * b.rows(), a.cols() * b.cols());
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long ra = 0; ra < a.rows(); ++ra)
        for (long ca = 0; ca < a.cols(); ++ca) {
            const cplx f = a.at(ra, ca);
            if (f == cplx{0.0, 0.0}) continue;
            for (long rb = 0; rb < b.rows(); ++rb)
                for (long cb = 0; cb < b.cols(); ++cb)
                    out.at(ra * b.rows() + rb, ca * b.cols() + cb) = f * b.at(rb, cb);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, BipartitionShape shape, Side keep) {
    const long dl = shape.dim_left, dr = shape.dim_right;
    if (!rho.is_square() || rho.rows() != dl * dr)
        fail(ErrorKind::Dimension, "density matrix does not match bipartition shape");
    if (keep == Side::Left) {
        ComplexMatrix out(dl, dl);
        for (long i = 0; i < dl; ++i)
            for (long j = 0; j < dl; ++j) {
                cplx s = 0.0;
                for (long r = 0; r < dr; ++r) s += rho.at(i * dr + r, j * dr + r);
                out.at(i, j) = s;
            }
        return out;
    }
    ComplexMatrix out(dr, dr);
    for (long i = 0; i < dr; ++i)
        for (long j = 0; j < dr; ++j) {
            cplx s = 0.0;
            for (long l = 0; l < dl; ++l) s += rho.at(l * dr + i, l * dr + j);
            out.at(i, j) = s;
        }
    return out;
}

std::vector<double> schmidt_coefficients(const ComplexMatrix& psi, BipartitionShape shape) {
    const long dl = shape.dim_left, dr = shape.dim_right;
    if (psi.cols() != 1 || psi.rows() != dl * dr)
        fail(ErrorKind::Dimension, "state vector does not match bipartition shape");
    double n = vec_norm(psi);
    if (std::abs(n - 1.0) > 1e-10)
        fail(ErrorKind::Normalization,
             "state vector norm " + std::to_string(n) + " is not 1 within 1e-10");
    Eigen::MatrixXcd m(dl, dr);
    for (long i = 0; i < dl; ++i)
        for (long j = 0; j < dr; ++j) m(i, j) = psi.at(i * dr + j, 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out; // Eigen returns them descending
}

double entropy_from_schmidt(std::span<const double> coeffs) {
    double h = 0.0;
    for (double c : coeffs) {
        double p = c * c;
        if (p < 1e-14) continue; // clamps roundoff, and 0 ln 0 := 0
        h -= p * std::log(p);
    }
    return h;
}

HermEig herm_eig(const ComplexMatrix& op) {
    if (!op.is_square()) fail(ErrorKind::Dimension, "eigendecomposition of non-square matrix");
    double dev = (op - op.adjoint()).norm_max();
    if (dev > 1e-10)
        fail(ErrorKind::Symmetry,
             "matrix deviates from Hermitian by " + std::to_string(dev) + " (max entry)");
    EigenMap m(op.data(), op.rows(), op.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) fail(ErrorKind::Precondition, "eigensolver failed");
    HermEig out;
    out.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    out.eigenvectors = ComplexMatrix(op.rows(), op.cols());
    for (long r = 0; r < op.rows(); ++r)
        for (long c = 0; c < op.cols(); ++c) out.eigenvectors.at(r, c) = solver.eigenvectors()(r, c);
    return out;
}

double vec_norm(const ComplexMatrix& v) { return v.norm_fro(); }

cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows())
        fail(ErrorKind::Dimension, "inner product of mismatched vectors");
    cplx s = 0.0;
    for (long i = 0; i < a.rows(); ++i) s += std::conj(a.at(i, 0)) * b.at(i, 0);
    return s;
}

ComplexMatrix normalized(const ComplexMatrix& v) {
    double n = vec_norm(v);
    if (n < 1e-300) fail(ErrorKind::Normalization, "cannot normalize a zero vector");
    ComplexMatrix out = v;
    out *= cplx{1.0 / n, 0.0};
    return out;
}

} // namespace qrf
