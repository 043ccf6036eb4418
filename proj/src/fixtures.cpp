#include "toposqt/fixtures.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace toposqt::fixtures {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kGrid = 1048576.0;  // 2^20
}  // namespace

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Matrix diag(const std::vector<double>& entries) {
    const int d = static_cast<int>(entries.size());
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Vector basis_state(int dim, int i) {
    Vector v = Vector::Zero(dim);
    v(i) = 1.0;
    return v;
}

std::shared_ptr<const ContextUniverse> qubit_universe(const TolerancePolicy& policy) {
    return std::make_shared<const ContextUniverse>(build_universe(
        2,
        {{HermitianOperator(sigma_z(), policy)}, {HermitianOperator(sigma_x(), policy)}},
        /*include_trivial=*/false, policy));
}

std::shared_ptr<const ContextUniverse> qutrit_universe(const TolerancePolicy& policy) {
    return std::make_shared<const ContextUniverse>(
        build_universe(3, {{HermitianOperator(diag({1, 2, 3}), policy)}},
                       /*include_trivial=*/false, policy));
}

std::shared_ptr<const ContextUniverse> dim4_universe(const TolerancePolicy& policy) {
    return std::make_shared<const ContextUniverse>(
        build_universe(4, {{HermitianOperator(diag({1, 2, 3, 4}), policy)}},
                       /*include_trivial=*/false, policy));
}

std::shared_ptr<const ContextUniverse> universe_for_dim(int dim,
                                                        const TolerancePolicy& policy) {
    switch (dim) {
        case 2:
            return qubit_universe(policy);
        case 3:
            return qutrit_universe(policy);
        case 4:
            return dim4_universe(policy);
        default:
            throw Error("universe_for_dim: fixtures cover dims 2-4");
    }
}

std::shared_ptr<const ContextUniverse> rotated_universe(int dim, std::uint64_t seed,
                                                        const TolerancePolicy& policy) {
    Rng rng(seed);
    const UnitaryOperator u = rng.unitary(dim, policy);
    return std::make_shared<const ContextUniverse>(
        twist_universe(u, *universe_for_dim(dim, policy), policy));
}

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
}

int Rng::uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
}

double Rng::dyadic(double lo, double hi) {
    const auto klo = static_cast<long long>(std::ceil(lo * kGrid));
    const auto khi = static_cast<long long>(std::floor(hi * kGrid));
    return static_cast<double>(std::uniform_int_distribution<long long>(klo, khi)(gen_)) /
           kGrid;
}

Matrix Rng::hermitian(int dim) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = std::complex<double>(uniform(-1, 1), uniform(-1, 1));
        }
    }
    return (m + m.adjoint()) / 2.0;
}

Matrix Rng::hermitian_with_spectrum(int dim, double lo, double hi) {
    std::vector<double> eigs(dim);
    for (auto& x : eigs) {
        x = uniform(lo, hi);
    }
    const Matrix u = unitary(dim).matrix();
    return u * diag(eigs) * u.adjoint();
}

Projection Rng::projection(int dim, const TolerancePolicy& policy) {
    const int rank = uniform_int(1, dim - 1);
    const Matrix u = unitary(dim, policy).matrix();
    Matrix m = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank; ++i) {
        m += u.col(i) * u.col(i).adjoint();
    }
    return Projection(m, policy);
}

UnitaryOperator Rng::unitary(int dim, const TolerancePolicy& policy) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = std::complex<double>(uniform(-1, 1), uniform(-1, 1));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    return UnitaryOperator(q, policy);
}

StateVector Rng::state(int dim, const TolerancePolicy& policy) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        v(i) = std::complex<double>(uniform(-1, 1), uniform(-1, 1));
    }
    return StateVector(v / v.norm(), policy);
}

std::map<std::string, double> Rng::function_on(const ContextUniverse& universe,
                                               const std::string& root) {
    std::map<std::string, double> f;
    for (const auto& key : universe.down_set(root)) {
        f.emplace(key, dyadic(-4, 4));
    }
    return f;
}

PoFunction Rng::order_reversing_on(const ContextUniverse& universe, const std::string& root) {
    // Assign parents before children (larger down-sets first); each context
    // takes the max over its assigned ancestors plus a nonnegative step, so
    // going down never decreases the value.
    std::vector<std::string> order = universe.down_set(root);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        const auto sa = universe.down_set(a).size();
        const auto sb = universe.down_set(b).size();
        return sa != sb ? sa > sb : a < b;
    });

    PoFunction f;
    f.root = root;
    f.direction = Monotonicity::order_reversing;
    for (const auto& key : order) {
        double floor_value = -2;
        for (const auto& [other, value] : f.values) {
            if (other != key && universe.leq(key, other)) {
                floor_value = std::max(floor_value, value);
            }
        }
        f.values.emplace(key, floor_value + dyadic(0, 2));
    }
    return f;
}

}  // namespace toposqt::fixtures
