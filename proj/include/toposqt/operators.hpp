#pragma once

// Validated wrappers around dense complex matrices. Dimensions of interest
// are tiny (2..8), so everything is dense and eagerly checked; the wrappers
// exist to make "this really is a projection" a type-level fact for the
// lattice code downstream.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "toposqt/errors.hpp"
#include "toposqt/tolerance.hpp"

namespace toposqt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest entrywise absolute difference; the norm used by validation and by
// "operators are equal within tolerance" checks throughout.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Frobenius norm of a product, used for zero-overlap tests.
double overlap_norm(const Matrix& a, const Matrix& b);

bool approx_equal(const Matrix& a, const Matrix& b, double tol);

class HermitianOperator {
  public:
    // Validates entrywise self-adjointness within policy.hermitian_tol, then
    // stores the hermitised part (A + A^dagger)/2 so downstream eigensolves
    // see an exactly self-adjoint matrix.
    explicit HermitianOperator(Matrix entries, const TolerancePolicy& policy = {});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }

  private:
    Matrix mat_;
};

class Projection {
  public:
    // Validates self-adjointness, idempotency (entrywise within
    // policy.proj_tol) and that eigenvalues sit on {0,1}.
    explicit Projection(Matrix entries, const TolerancePolicy& policy = {});

    int dim() const { return static_cast<int>(mat_.rows()); }
    int rank() const { return rank_; }
    const Matrix& matrix() const { return mat_; }
    bool is_zero() const { return rank_ == 0; }
    bool is_identity() const { return rank_ == dim(); }

    static Projection zero(int dim);
    static Projection identity(int dim);
    // Rank-one projection onto the line spanned by v (v need not be unit).
    static Projection onto_line(const Vector& v);
    // Projection onto the span of the columns of basis (assumed orthonormal).
    static Projection onto_span(const Matrix& orthonormal_basis);

  private:
    Matrix mat_;
    int rank_ = 0;
};

class UnitaryOperator {
  public:
    // Validates U U^dagger == 1 entrywise within policy.unitary_tol.
    explicit UnitaryOperator(Matrix entries, const TolerancePolicy& policy = {});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    UnitaryOperator inverse() const;

  private:
    Matrix mat_;
};

// Orthogonal projection order: P <= Q iff Q P == P (range inclusion), tested
// entrywise within policy.order_cmp_tol.
bool proj_leq(const Projection& p, const Projection& q, const TolerancePolicy& policy = {});

// Lattice operations on closed subspaces. join = projection onto the span of
// the union of ranges, meet = complement of the join of complements. Rank
// decisions use policy.proj_tol on the eigenvalues of the summed projections.
Projection proj_join(const std::vector<Projection>& ps, const TolerancePolicy& policy = {});
Projection proj_meet(const std::vector<Projection>& ps, const TolerancePolicy& policy = {});
Projection proj_join(const Projection& p, const Projection& q, const TolerancePolicy& policy = {});
Projection proj_meet(const Projection& p, const Projection& q, const TolerancePolicy& policy = {});
Projection proj_complement(const Projection& p, const TolerancePolicy& policy = {});

}  // namespace toposqt
