#include "toposqt/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace toposqt {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("max_abs_diff: shape mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

double overlap_norm(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("overlap_norm: shape mismatch");
    }
    return (a * b).norm();
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return max_abs_diff(a, b) <= tol;
}

namespace {

void check_square(const Matrix& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidOperator(std::string(who) + ": matrix must be square and non-empty");
    }
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries, const TolerancePolicy& policy) {
    check_square(entries, "HermitianOperator");
    const double dev = (entries - entries.adjoint().eval()).cwiseAbs().maxCoeff();
    if (dev > policy.hermitian_tol) {
        throw InvalidOperator("HermitianOperator: not self-adjoint (deviation " +
                              std::to_string(dev) + ")");
    }
    mat_ = 0.5 * (entries + entries.adjoint().eval());
}

Projection::Projection(Matrix entries, const TolerancePolicy& policy) {
    check_square(entries, "Projection");
    const double herm_dev = (entries - entries.adjoint().eval()).cwiseAbs().maxCoeff();
    if (herm_dev > policy.hermitian_tol) {
        throw InvalidOperator("Projection: not self-adjoint");
    }
    mat_ = 0.5 * (entries + entries.adjoint().eval());
    const double idem_dev = (mat_ * mat_ - mat_).cwiseAbs().maxCoeff();
    if (idem_dev > policy.proj_tol) {
        throw InvalidOperator("Projection: not idempotent (deviation " +
                              std::to_string(idem_dev) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
    rank_ = 0;
    for (int i = 0; i < mat_.rows(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (std::abs(ev) > policy.proj_tol && std::abs(ev - 1.0) > policy.proj_tol) {
            throw InvalidOperator("Projection: eigenvalue off {0,1}: " + std::to_string(ev));
        }
        if (ev > 0.5) ++rank_;
    }
}

Projection Projection::zero(int dim) { return Projection(Matrix::Zero(dim, dim)); }

Projection Projection::identity(int dim) { return Projection(Matrix::Identity(dim, dim)); }

Projection Projection::onto_line(const Vector& v) {
    const double n = v.norm();
    if (n == 0.0) {
        throw InvalidOperator("Projection::onto_line: zero vector");
    }
    Vector u = v / n;
    return Projection(u * u.adjoint());
}

Projection Projection::onto_span(const Matrix& basis) {
    if (basis.cols() == 0) {
        return Projection::zero(static_cast<int>(basis.rows()));
    }
    return Projection(basis * basis.adjoint());
}

UnitaryOperator::UnitaryOperator(Matrix entries, const TolerancePolicy& policy) {
    check_square(entries, "UnitaryOperator");
    const Matrix gram = entries * entries.adjoint();
    const double dev =
        (gram - Matrix::Identity(entries.rows(), entries.cols())).cwiseAbs().maxCoeff();
    if (dev > policy.unitary_tol) {
        throw InvalidOperator("UnitaryOperator: U U^dagger != 1 (deviation " +
                              std::to_string(dev) + ")");
    }
    mat_ = std::move(entries);
}

UnitaryOperator UnitaryOperator::inverse() const { return UnitaryOperator(mat_.adjoint()); }

bool proj_leq(const Projection& p, const Projection& q, const TolerancePolicy& policy) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("proj_leq: dimension mismatch");
    }
    return (q.matrix() * p.matrix() - p.matrix()).cwiseAbs().maxCoeff() <= policy.order_cmp_tol;
}

Projection proj_join(const std::vector<Projection>& ps, const TolerancePolicy& policy) {
    if (ps.empty()) {
        throw InvalidOperator("proj_join: empty operand list");
    }
    const int d = ps.front().dim();
    // range(join) = span of the union of ranges = eigenspace of sum(P_i) away
    // from zero. Summed projections are PSD, so an eigenvalue threshold is a
    // clean rank decision.
    Matrix s = Matrix::Zero(d, d);
    for (const auto& p : ps) {
        if (p.dim() != d) throw DimensionMismatch("proj_join: dimension mismatch");
        s += p.matrix();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    Matrix basis(d, d);
    int r = 0;
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) > policy.proj_tol) {
            basis.col(r++) = es.eigenvectors().col(i);
        }
    }
    return Projection::onto_span(basis.leftCols(r));
}

Projection proj_complement(const Projection& p, const TolerancePolicy& policy) {
    return Projection(Matrix::Identity(p.dim(), p.dim()) - p.matrix(), policy);
}

Projection proj_meet(const std::vector<Projection>& ps, const TolerancePolicy& policy) {
    if (ps.empty()) {
        throw InvalidOperator("proj_meet: empty operand list");
    }
    // Intersection of ranges via the complement identity:
    // meet(P_i) = 1 - join(1 - P_i).
    std::vector<Projection> complements;
    complements.reserve(ps.size());
    for (const auto& p : ps) complements.push_back(proj_complement(p, policy));
    return proj_complement(proj_join(complements, policy), policy);
}

Projection proj_join(const Projection& p, const Projection& q, const TolerancePolicy& policy) {
    return proj_join(std::vector<Projection>{p, q}, policy);
}

Projection proj_meet(const Projection& p, const Projection& q, const TolerancePolicy& policy) {
    return proj_meet(std::vector<Projection>{p, q}, policy);
}

}  // namespace toposqt
