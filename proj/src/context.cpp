#include "toposqt/context.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>

namespace toposqt {

namespace {

// Fixed-width decimal rendering at 8 places with -0 normalised, so canonical
// keys are stable under fp noise well below 0.5e-8.
std::string round8(double x) {
    double r = x;
    if (std::abs(r) < 0.5e-8) r = 0.0;  // avoid "-0.00000000"
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8f", r);
    return buf;
}

std::string block_string(const Projection& p) {
    std::string s = "r" + std::to_string(p.rank()) + ":";
    for (int i = 0; i < p.dim(); ++i) {
        for (int j = 0; j < p.dim(); ++j) {
            const Complex z = p.matrix()(i, j);
            s += round8(z.real());
            s += ",";
            s += round8(z.imag());
            s += ";";
        }
    }
    return s;
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

Context::Context(std::vector<Projection> blocks, const TolerancePolicy& policy)
    : blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
        throw InvalidOperator("Context: no blocks");
    }
    const int d = blocks_.front().dim();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].dim() != d) {
            throw DimensionMismatch("Context: mixed block dimensions");
        }
        if (blocks_[i].is_zero()) {
            throw InvalidOperator("Context: zero block");
        }
        sum += blocks_[i].matrix();
        for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
            if (overlap_norm(blocks_[i].matrix(), blocks_[j].matrix()) > policy.order_cmp_tol) {
                throw InvalidOperator("Context: blocks not orthogonal");
            }
        }
    }
    if (!approx_equal(sum, Matrix::Identity(d, d), policy.order_cmp_tol)) {
        throw InvalidOperator("Context: blocks do not resolve the identity");
    }

    std::vector<std::pair<std::string, std::size_t>> order;
    order.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        order.emplace_back(block_string(blocks_[i]), i);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        const int ra = blocks_[a.second].rank();
        const int rb = blocks_[b.second].rank();
        if (ra != rb) return ra < rb;
        return a.first < b.first;
    });
    std::vector<Projection> sorted;
    std::string canonical = "d" + std::to_string(d) + "|";
    sorted.reserve(blocks_.size());
    for (const auto& [s, idx] : order) {
        sorted.push_back(blocks_[idx]);
        canonical += s;
        canonical += "|";
    }
    blocks_ = std::move(sorted);
    key_ = "d" + std::to_string(d) + "k" + std::to_string(blocks_.size()) + "-" +
           fnv1a64_hex(canonical);
}

Projection Context::subset_projection(unsigned mask) const {
    const int d = dim();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (mask & (1u << i)) {
            sum += blocks_[i].matrix();
        }
    }
    return Projection(sum);
}

Context trivial_context(int dim) {
    return Context({Projection::identity(dim)});
}

Context context_from_operators(const std::vector<HermitianOperator>& ops,
                               const TolerancePolicy& policy) {
    if (ops.empty()) {
        throw InvalidOperator("context_from_operators: no generators");
    }
    const int d = ops.front().dim();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].dim() != d) {
            throw DimensionMismatch("context_from_operators: mixed dimensions");
        }
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            const Matrix comm = ops[i].matrix() * ops[j].matrix() -
                                ops[j].matrix() * ops[i].matrix();
            const double dev = comm.cwiseAbs().maxCoeff();
            if (dev > policy.order_cmp_tol) {
                throw NotCommuting("context_from_operators: generators " + std::to_string(i) +
                                   " and " + std::to_string(j) + " do not commute (deviation " +
                                   std::to_string(dev) + ")");
            }
        }
    }

    // Iteratively split joint eigenspaces: carry orthonormal bases of the
    // current blocks and refine each against the next generator's compressed
    // action on that block.
    std::vector<Matrix> bases = {Matrix::Identity(d, d)};
    for (const auto& op : ops) {
        std::vector<Matrix> next;
        for (const auto& u : bases) {
            const Matrix m_raw = u.adjoint() * op.matrix() * u;
            const Matrix m = 0.5 * (m_raw + m_raw.adjoint().eval());
            Eigen::SelfAdjointEigenSolver<Matrix> es(m);
            const int r = static_cast<int>(m.rows());
            const double scale =
                std::max(1.0, std::max(std::abs(es.eigenvalues()(0)),
                                       std::abs(es.eigenvalues()(r - 1))));
            int i = 0;
            while (i < r) {
                int j = i;
                while (j < r && (j == i || es.eigenvalues()(j) - es.eigenvalues()(j - 1) <=
                                               policy.eig_cluster_tol * scale)) {
                    ++j;
                }
                Matrix sub(r, j - i);
                for (int k = i; k < j; ++k) sub.col(k - i) = es.eigenvectors().col(k);
                next.push_back(u * sub);
                i = j;
            }
        }
        bases = std::move(next);
    }

    std::vector<Projection> blocks;
    blocks.reserve(bases.size());
    for (const auto& u : bases) {
        blocks.push_back(Projection::onto_span(u));
    }
    return Context(std::move(blocks), policy);
}

Context context_of_projection(const Projection& p, const TolerancePolicy& policy) {
    if (p.is_zero() || p.is_identity()) {
        return trivial_context(p.dim());
    }
    return Context({p, proj_complement(p, policy)}, policy);
}

namespace {

// Set partitions via restricted growth strings; visit receives the part index
// of every element.
void enumerate_partitions(int n, std::vector<int>& rgs, int pos, int max_used,
                          const std::function<void(const std::vector<int>&)>& visit) {
    if (pos == n) {
        visit(rgs);
        return;
    }
    for (int part = 0; part <= max_used + 1; ++part) {
        rgs[pos] = part;
        enumerate_partitions(n, rgs, pos + 1, std::max(max_used, part), visit);
    }
}

}  // namespace

std::vector<Context> subcontexts(const Context& v, bool include_trivial,
                                 const TolerancePolicy& policy) {
    const int k = v.block_count();
    std::vector<Context> out;
    std::vector<int> rgs(k, 0);
    enumerate_partitions(k, rgs, 0, -1, [&](const std::vector<int>& parts) {
        const int nparts = *std::max_element(parts.begin(), parts.end()) + 1;
        if (nparts == 1 && !include_trivial && k > 1) {
            return;
        }
        const int d = v.dim();
        std::vector<Matrix> sums(nparts, Matrix::Zero(d, d));
        for (int i = 0; i < k; ++i) {
            sums[parts[i]] += v.block(i).matrix();
        }
        std::vector<Projection> blocks;
        blocks.reserve(nparts);
        for (const auto& s : sums) blocks.emplace_back(s, policy);
        out.emplace_back(std::move(blocks), policy);
    });
    return out;
}

bool is_subcontext(const Context& sub, const Context& super, const TolerancePolicy& policy) {
    if (sub.dim() != super.dim()) {
        return false;
    }
    for (const auto& b : sub.blocks()) {
        Matrix covered = Matrix::Zero(sub.dim(), sub.dim());
        for (const auto& q : super.blocks()) {
            if (proj_leq(q, b, policy)) {
                covered += q.matrix();
            }
        }
        if (!approx_equal(covered, b.matrix(), policy.order_cmp_tol)) {
            return false;
        }
    }
    return true;
}

int restrict_character(const Context& v, int block_index, const Context& sub,
                       const TolerancePolicy& policy) {
    if (!is_subcontext(sub, v, policy)) {
        throw NotASubcontext("restrict_character: target is not a subcontext");
    }
    const Projection& b = v.block(block_index);
    for (int j = 0; j < sub.block_count(); ++j) {
        if (proj_leq(b, sub.block(j), policy)) {
            return j;
        }
    }
    throw NotASubcontext("restrict_character: no dominating block (corrupt context pair)");
}

std::vector<Projection> character_ultrafilter(const Context& v, int block_index) {
    const int k = v.block_count();
    std::vector<Projection> out;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        if (mask & (1u << block_index)) {
            out.push_back(v.subset_projection(mask));
        }
    }
    return out;
}

PrincipalFilter filter_of_projection(const Projection& p) {
    if (p.is_zero()) {
        throw EmptyFilterBase("filter_of_projection: zero generator is not a filter");
    }
    return PrincipalFilter{p};
}

PrincipalFilter cone(const std::vector<Projection>& filter_base, const TolerancePolicy& policy) {
    if (filter_base.empty()) {
        throw EmptyFilterBase("cone: empty filter base");
    }
    Projection gen = proj_meet(filter_base, policy);
    if (gen.is_zero()) {
        throw EmptyFilterBase("cone: meet of base is zero, not a filter base");
    }
    return PrincipalFilter{std::move(gen)};
}

}  // namespace toposqt
