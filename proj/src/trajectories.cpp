#include "rmtlab/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "model_detail.hpp"
#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

constexpr int kMaxRefinementDepth = 20;
constexpr double kCollisionGap = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Distance from points[i] to its nearest neighbour within the same set.
std::vector<double> local_gaps(std::span<const Complex> points) {
    const std::size_t n = points.size();
    std::vector<double> gaps(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double d = std::abs(points[i] - points[k]);
            gaps[i] = std::min(gaps[i], d);
            gaps[k] = std::min(gaps[k], d);
        }
    }
    return gaps;
}

// Every point moves by at most half the gap around its destination.
bool displacement_ok(std::span<const Complex> from, std::span<const Complex> to) {
    const auto gaps = local_gaps(to);
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (!(std::abs(from[i] - to[i]) <= 0.5 * gaps[i])) return false;
    }
    return true;
}

// Nearest-neighbour assignment, returned only when it is provably the unique optimum.
bool nearest_assignment(std::span<const Complex> prev, std::span<const Complex> next, std::vector<Index>& perm) {
    const std::size_t n = prev.size();
    perm.assign(n, 0);
    std::vector<bool> taken(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        double best = kInf;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = std::abs(prev[i] - next[k]);
            if (d < best) {
                best = d;
                arg = k;
            }
        }
        if (taken[arg]) return false;
        taken[arg] = true;
        perm[i] = static_cast<Index>(arg);
    }
    std::vector<Complex> aligned(n);
    for (std::size_t i = 0; i < n; ++i) aligned[i] = next[static_cast<std::size_t>(perm[i])];
    // If |prev_i − next_p(i)| < gap/2 for all i, any other pairing costs strictly more.
    const auto gaps = local_gaps(aligned);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(prev[i] - aligned[i]) < 0.5 * gaps[i])) return false;
    }
    return true;
}

// Hungarian algorithm (potentials form), O(n^3). cost is row-major n x n.
std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

std::vector<std::size_t> lex_order(std::span<const Complex> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });
    return order;
}

void check_range(const ModelConfig& model, double t) {
    if (!std::isfinite(t)) fail(ErrorKind::TOutOfRange, "t must be finite");
    if (model.kind == ModelKind::Multiplicative && (t < -1.0 || t > 1.0)) {
        fail(ErrorKind::TOutOfRange, "multiplicative model requires t in [-1, 1]");
    }
}

// Orthonormal basis of x^⊥ from a Householder reflection.
Matrix complement_basis(const Vector& x) {
    const Index n = x.size();
    Eigen::HouseholderQR<Matrix> qr{Matrix(x)};
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return q.rightCols(n - 1);
}

class Tracker {
public:
    Tracker(const ModelConfig& model, const Matrix& base) : model_(model), base_(base) {}

    TrajectoryBundle run(double t_start, double t_end, int steps) {
        current_ = spectrum(t_start);
        bundle_.paths.assign(current_.size(), {});
        bundle_.min_gap = min_pairwise_gap(current_);
        record(t_start);
        double t_prev = t_start;
        for (int s = 1; s <= steps; ++s) {
            const double t_next = s == steps ? t_end : t_start + (t_end - t_start) * s / steps;
            advance(t_prev, t_next, spectrum(t_next), 0);
            t_prev = t_next;
        }
        return std::move(bundle_);
    }

private:
    std::vector<Complex> spectrum(double t) const { return to_std(eigenvalues(detail::assemble(model_, base_, t))); }

    void record(double t) {
        bundle_.grid.push_back(t);
        for (std::size_t j = 0; j < current_.size(); ++j) bundle_.paths[j].push_back(current_[j]);
    }

    void advance(double ta, double tb, const std::vector<Complex>& next, int depth) {
        const auto perm = match_sets(current_, next);
        std::vector<Complex> aligned(next.size());
        for (std::size_t i = 0; i < next.size(); ++i) aligned[i] = next[static_cast<std::size_t>(perm[i])];
        if (displacement_ok(current_, aligned)) {
            current_ = std::move(aligned);
            bundle_.min_gap = std::min(bundle_.min_gap, min_pairwise_gap(current_));
            record(tb);
            return;
        }
        if (depth >= kMaxRefinementDepth) {
            fail(ErrorKind::RefinementExhausted,
                 "unresolved near-collision between t = " + std::to_string(ta) + " and t = " + std::to_string(tb));
        }
        const double tm = 0.5 * (ta + tb);
        ++bundle_.refinements;
        advance(ta, tm, spectrum(tm), depth + 1);
        advance(tm, tb, next, depth + 1);
    }

    const ModelConfig& model_;
    const Matrix& base_;
    std::vector<Complex> current_;
    TrajectoryBundle bundle_;
};

}  // namespace

std::vector<Complex> TrajectoryBundle::cross_section(std::size_t k) const {
    std::vector<Complex> out(paths.size());
    for (std::size_t j = 0; j < paths.size(); ++j) out[j] = paths[j].at(k);
    return out;
}

std::vector<Index> match_sets(std::span<const Complex> prev, std::span<const Complex> next) {
    if (prev.size() != next.size()) {
        fail(ErrorKind::CardinalityMismatch, "cannot match sets of sizes " + std::to_string(prev.size()) + " and " +
                                                 std::to_string(next.size()));
    }
    const std::size_t n = prev.size();
    std::vector<Index> perm;
    if (n == 0) return perm;
    if (nearest_assignment(prev, next, perm)) return perm;

    const auto row_order = lex_order(prev);
    const auto col_order = lex_order(next);
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(prev[row_order[i]] - next[col_order[j]]);
    }
    const auto assignment = hungarian(cost, n);
    perm.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) perm[row_order[i]] = static_cast<Index>(col_order[assignment[i]]);
    return perm;
}

TrajectoryBundle track(const ModelConfig& model, const Matrix& base, double t_start, double t_end,
                       int initial_steps) {
    model.validate();
    detail::check_base_kind(model, base);
    if (initial_steps < 2) fail(ErrorKind::InvalidArgument, "initial_steps must be >= 2");
    check_range(model, t_start);
    check_range(model, t_end);
    if (t_start == t_end) fail(ErrorKind::InvalidArgument, "t_start and t_end must differ");
    return Tracker(model, base).run(t_start, t_end, initial_steps);
}

PhasePoint phase_point(const ModelConfig& model, const Matrix& base, double t) {
    model.validate();
    detail::check_base_kind(model, base);
    check_range(model, t);
    const EigenSystem es = eigen_decompose(detail::assemble(model, base, t));
    const Matrix left_times_d = es.lefts * detail::derivative(model, base);
    PhasePoint out;
    out.positions = to_std(es.values);
    out.velocities.resize(static_cast<std::size_t>(es.size()));
    for (Index j = 0; j < es.size(); ++j) {
        out.velocities[static_cast<std::size_t>(j)] = left_times_d.row(j) * es.rights.col(j);
    }
    return out;
}

std::vector<Complex> velocities_at(const ModelConfig& model, const Matrix& base, double t) {
    return phase_point(model, base, t).velocities;
}

std::vector<Complex> initial_velocities(const ModelConfig& model, const Matrix& base) {
    return velocities_at(model, base, model.kind == ModelKind::Multiplicative ? 1.0 : 0.0);
}

OdeResidual ode_residual(const TrajectoryBundle& bundle) {
    OdeResidual out;
    const std::size_t n = bundle.paths.size();
    out.residuals.assign(n, {});
    const auto& g = bundle.grid;
    if (g.size() < 3 || n == 0) return out;

    double widest = 0.0;
    for (std::size_t k = 1; k + 1 < g.size(); ++k) {
        const double h1 = g[k] - g[k - 1];
        const double h2 = g[k + 1] - g[k];
        if (std::abs(h1 - h2) <= 1e-9 * std::max(std::abs(h1), std::abs(h2))) {
            out.grid_index.push_back(k);
            widest = std::max(widest, std::abs(h2));
        }
    }
    if (out.grid_index.empty()) return out;
    if (n > 1 && !(bundle.min_gap > 10.0 * widest)) {
        fail(ErrorKind::GapTooSmall, "min_gap " + std::to_string(bundle.min_gap) +
                                         " is not above 10x the grid spacing " + std::to_string(widest));
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<Complex> first(n);
    for (const std::size_t k : out.grid_index) {
        const double h = g[k + 1] - g[k];
        for (std::size_t j = 0; j < n; ++j) first[j] = (bundle.paths[j][k + 1] - bundle.paths[j][k - 1]) / (2.0 * h);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& p = bundle.paths[j];
            const Complex lhs = (p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h);
            Complex sum = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                if (m != j) sum += first[m] / (p[k] - bundle.paths[m][k]);
            }
            const Complex rhs = 2.0 * first[j] * sum;
            // Representation error of the three samples bounds the rounding in the second difference.
            const double noise = eps * (std::abs(p[k + 1]) + 2.0 * std::abs(p[k]) + std::abs(p[k - 1])) / (h * h);
            const double diff = std::max(0.0, std::abs(lhs - rhs) - noise);
            out.residuals[j].push_back(diff / (std::abs(lhs) + std::abs(rhs) + 1e-12));
        }
    }
    return out;
}

TrajectoryBundle integrate_ode(std::span<const Complex> positions, std::span<const Complex> velocities,
                               double t_start, double t_end, double step) {
    if (positions.size() != velocities.size()) {
        fail(ErrorKind::DimensionMismatch, "positions and velocities differ in length");
    }
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
        fail(ErrorKind::InvalidArgument, "integrate_ode needs a finite positive step and finite span");
    }
    const std::size_t n = positions.size();
    std::vector<Complex> x(positions.begin(), positions.end());
    std::vector<Complex> p(velocities.begin(), velocities.end());

    TrajectoryBundle bundle;
    bundle.paths.assign(n, {});
    bundle.min_gap = kInf;
    auto record = [&](double t) {
        bundle.grid.push_back(t);
        for (std::size_t j = 0; j < n; ++j) bundle.paths[j].push_back(x[j]);
    };
    // Returns the smallest pairwise gap of `pos`.
    auto guard = [&](const std::vector<Complex>& pos, double t) {
        double gap = kInf;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(pos[j].real()) || !std::isfinite(pos[j].imag())) {
                fail(ErrorKind::CollisionAbort, "path " + std::to_string(j) + " diverged at t = " + std::to_string(t));
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                const double d = std::abs(pos[j] - pos[k]);
                if (d < kCollisionGap) {
                    fail(ErrorKind::CollisionAbort, "paths " + std::to_string(j) + " and " + std::to_string(k) +
                                                        " within 1e-6 at t = " + std::to_string(t));
                }
                gap = std::min(gap, d);
            }
        }
        bundle.min_gap = std::min(bundle.min_gap, gap);
        return gap;
    };
    auto accel = [&](const std::vector<Complex>& pos, const std::vector<Complex>& vel) {
        std::vector<Complex> a(n);
        for (std::size_t j = 0; j < n; ++j) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) sum += vel[k] / (pos[j] - pos[k]);
            }
            a[j] = 2.0 * vel[j] * sum;
        }
        return a;
    };
    auto axpy = [&](const std::vector<Complex>& base, const std::vector<Complex>& dir, double h) {
        std::vector<Complex> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = base[j] + h * dir[j];
        return out;
    };

    double gap = guard(x, t_start);
    record(t_start);
    const double span = t_end - t_start;
    const auto steps = static_cast<long>(std::ceil(std::abs(span) / step - 1e-12));
    for (long s = 1; s <= steps; ++s) {
        const double t0 = t_start + span * static_cast<double>(s - 1) / static_cast<double>(steps);
        const double t1 = s == steps ? t_end : t_start + span * static_cast<double>(s) / static_cast<double>(steps);
        const double h = t1 - t0;
        const auto k1x = p;
        const auto k1p = accel(x, p);
        const auto x2 = axpy(x, k1x, h / 2);
        guard(x2, t0 + h / 2);
        const auto k2x = axpy(p, k1p, h / 2);
        const auto k2p = accel(x2, k2x);
        const auto x3 = axpy(x, k2x, h / 2);
        guard(x3, t0 + h / 2);
        const auto k3x = axpy(p, k2p, h / 2);
        const auto k3p = accel(x3, k3x);
        const auto x4 = axpy(x, k3x, h);
        guard(x4, t1);
        const auto k4x = axpy(p, k3p, h);
        const auto k4p = accel(x4, k4x);
        double moved = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex dx = h / 6.0 * (k1x[j] + 2.0 * k2x[j] + 2.0 * k3x[j] + k4x[j]);
            x[j] += dx;
            p[j] += h / 6.0 * (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]);
            moved = std::max(moved, std::abs(dx));
        }
        // A step that covers half the gap has jumped over, or into, a near-collision.
        if (!(moved <= 0.5 * gap)) {
            fail(ErrorKind::CollisionAbort, "step from t = " + std::to_string(t0) + " moves a path by " +
                                                std::to_string(moved) + ", over half the gap " + std::to_string(gap));
        }
        gap = guard(x, t1);
        record(t1);
    }
    return bundle;
}

LargeTLimits large_t_limits(const ModelConfig& model, const Matrix& base) {
    model.validate();
    detail::check_base_kind(model, base);
    const Index n = base.rows();
    LargeTLimits out;
    switch (model.kind) {
        case ModelKind::Additive: {
            out.escape_rate = model.w.dot(model.v);
            if (n == 1) return out;
            const EigenSystem es = eigen_decompose(base);
            const Vector a = es.lefts * model.v;
            const RowVector b = model.w.adjoint() * es.rights;
            const Vector c = a.cwiseProduct(b.transpose());
            if (std::abs(c.sum()) <= 1e-12) {
                fail(ErrorKind::DegenerateCoupling, "w^*v vanishes; no finite-limit reduction");
            }
            // Λ + t c 1^T: finite limits solve 1^T x = 0, (Λ − μ) x ∈ span(c).
            const Matrix qc = complement_basis(c);
            const Matrix q1 = complement_basis(Vector::Ones(n));
            const Matrix lhs = qc.adjoint() * q1;
            const Matrix rhs = qc.adjoint() * es.values.asDiagonal() * q1;
            out.limits = to_std(eigenvalues(lhs.partialPivLu().solve(rhs)));
            return out;
        }
        case ModelKind::AntiHermitian: {
            out.escape_rate = Complex{0.0, 1.0};
            if (n == 1) return out;
            const Matrix q = complement_basis(model.v);
            const Eigen::VectorXd values = hermitian_eigenvalues(q.adjoint() * base * q);
            for (Index i = 0; i < values.size(); ++i) out.limits.emplace_back(values(i), 0.0);
            return out;
        }
        case ModelKind::Multiplicative:
            break;
    }
    fail(ErrorKind::KindMismatch, "large-t limits exist only for the additive and anti-Hermitian models");
}

}  // namespace rmtlab
