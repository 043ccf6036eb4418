#pragma once

// Shared desk-scale fixtures: the canonical small universes the checks and
// tests run on, plus a seeded generator for random operators, states,
// unitaries and poset functions. Random values used in exactness-sensitive
// checks live on the dyadic grid (multiples of 2^-20), where +, -, abs and
// max are exact in doubles.

#include <cstdint>
#include <memory>
#include <random>

#include "toposqt/truth.hpp"

namespace toposqt::fixtures {

Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix hadamard();
Matrix diag(const std::vector<double>& entries);
Vector basis_state(int dim, int i);

// Two incomparable maximal contexts on C^2 (eigenbases of sigma_z and
// sigma_x); the smallest universe with interesting global-element structure.
std::shared_ptr<const ContextUniverse> qubit_universe(const TolerancePolicy& policy = {});
// diag(1,2,3) and its three coarsenings: 4 contexts.
std::shared_ptr<const ContextUniverse> qutrit_universe(const TolerancePolicy& policy = {});
// diag(1,2,3,4) closed under coarsening: 14 contexts.
std::shared_ptr<const ContextUniverse> dim4_universe(const TolerancePolicy& policy = {});
// The fixture universe for a dimension (2, 3 or 4).
std::shared_ptr<const ContextUniverse> universe_for_dim(int dim,
                                                        const TolerancePolicy& policy = {});
// The dim fixture conjugated by a seeded random unitary: same order type,
// non-diagonal blocks.
std::shared_ptr<const ContextUniverse> rotated_universe(int dim, std::uint64_t seed,
                                                        const TolerancePolicy& policy = {});

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds
    // Uniform multiple of 2^-20 in [lo, hi]; exact under +/-/abs/max.
    double dyadic(double lo, double hi);

    Matrix hermitian(int dim);
    Matrix hermitian_with_spectrum(int dim, double lo, double hi);
    Projection projection(int dim, const TolerancePolicy& policy = {});
    UnitaryOperator unitary(int dim, const TolerancePolicy& policy = {});
    StateVector state(int dim, const TolerancePolicy& policy = {});

    // Random dyadic-valued function on down_set(root): no monotonicity.
    std::map<std::string, double> function_on(const ContextUniverse& universe,
                                              const std::string& root);
    // Random order-reversing dyadic function on down_set(root).
    PoFunction order_reversing_on(const ContextUniverse& universe, const std::string& root);

  private:
    std::mt19937_64 gen_;
};

}  // namespace toposqt::fixtures
