#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qrf {

using cplx = std::complex<double>;

// Guard on rows*cols of newly allocated matrices. Default 2^20 entries,
// overridable with the QRF_MAX_DIM environment variable or the setter.
long long max_matrix_entries();
void set_max_matrix_entries(long long n);

// Dense complex matrix, row-major. Column vectors are cols == 1.
// Constructors reject non-finite entries and allocations past the guard.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(long rows, long cols);
    ComplexMatrix(long rows, long cols, std::vector<cplx> entries);

    static ComplexMatrix identity(long n);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);
    static ComplexMatrix column(std::vector<cplx> v);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    long size() const { return rows_ * cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    cplx& at(long r, long c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& at(long r, long c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    const std::vector<cplx>& entries() const { return data_; }

    ComplexMatrix adjoint() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);
    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    cplx trace() const;
    double norm_max() const;
    double norm_fro() const;

private:
    long rows_ = 0;
    long cols_ = 0;
    std::vector<cplx> data_;
};

// Factorization H_left ⊗ H_right of a vector of dimension dim_left*dim_right.
struct BipartitionShape {
    long dim_left = 0;
    long dim_right = 0;
};

enum class Side { Left, Right };

// Kronecker product, left factor is the slow index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced density matrix on the kept side of the bipartition.
ComplexMatrix partial_trace(const ComplexMatrix& rho, BipartitionShape shape, Side keep);

// Descending singular values of the dim_left x dim_right reshaping of a unit vector.
std::vector<double> schmidt_coefficients(const ComplexMatrix& psi, BipartitionShape shape);

// -sum lambda^2 ln lambda^2 in nats, with 0 ln 0 := 0.
double entropy_from_schmidt(std::span<const double> coeffs);

struct HermEig {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // unitary, columns match eigenvalues
};
HermEig herm_eig(const ComplexMatrix& op);

double vec_norm(const ComplexMatrix& v);
cplx inner(const ComplexMatrix& a, const ComplexMatrix& b); // <a|b> for column vectors
ComplexMatrix normalized(const ComplexMatrix& v);

} // namespace qrf
