#include "entrank/ef_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entrank/error.hpp"
#include "entrank/random.hpp"

namespace entrank {

double Ensemble::average_entanglement() const {
    double e = 0.0;
    for (const auto& m : members) e += m.weight * pure_entanglement(m.psi);
    return e;
}

double Ensemble::reconstruction_error() const {
    ComplexMatrix sum(realized_state.dims().total());
    for (const auto& m : members) sum += m.weight * m.psi.projector();
    return max_abs_diff(sum, realized_state.rho());
}

double Ensemble::weight_sum() const {
    double s = 0.0;
    for (const auto& m : members) s += m.weight;
    return s;
}

namespace {

// Columns sqrt(lambda_i) e_i over the range of rho.
ComplexMatrix scaled_range(const BipartiteState& rho, double rank_epsilon) {
    const EigenDecomposition eig = hermitian_eig(rho.rho());
    const std::size_t r = numerical_rank(eig.values, rank_epsilon);
    ComplexMatrix m(rho.dims().total(), r);
    for (std::size_t i = 0; i < r; ++i) {
        const double s = std::sqrt(eig.values[i]);
        for (std::size_t n = 0; n < m.rows(); ++n) m(n, i) = s * eig.vectors(n, i);
    }
    return m;
}

void require_isometry(const ComplexMatrix& v) {
    const double err = max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(v.cols()));
    if (err > 1e-10) throw Error(ErrorKind::NotIsometry, "||V^dagger V - 1||_max = " + std::to_string(err));
}

Ensemble build_ensemble(const BipartiteState& rho, const ComplexMatrix& range, const ComplexMatrix& v) {
    if (v.cols() != range.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "isometry has " + std::to_string(v.cols()) +
                                                      " columns but the state has rank " +
                                                      std::to_string(range.cols()));
    }
    require_isometry(v);
    Ensemble ens{{}, rho};
    const std::size_t n = range.rows();
    for (std::size_t j = 0; j < v.rows(); ++j) {
        CVector u(n);
        for (std::size_t i = 0; i < v.cols(); ++i) {
            const cplx vji = v(j, i);
            if (vji == cplx{}) continue;
            for (std::size_t x = 0; x < n; ++x) u[x] += vji * range(x, i);
        }
        const double w = std::pow(norm(u), 2);
        if (w <= 1e-300) continue;
        ens.members.push_back({w, PureState::normalized(rho.dims(), std::move(u))});
    }
    return ens;
}

// Objective sum_j p_j S(sigma_j / p_j) over the isometry rows, with the
// Euclidean gradient dF = 2 Re tr(grad^dagger dV).
class EnsembleObjective {
public:
    EnsembleObjective(Dims dims, ComplexMatrix range) : dims_(dims), range_(std::move(range)) {
        trace_a_ = dims_.a <= dims_.b;  // keep the smaller reduced matrix
    }

    std::size_t rank() const noexcept { return range_.cols(); }
    const ComplexMatrix& range() const noexcept { return range_; }

    double value(const ComplexMatrix& v) const { return evaluate(v, nullptr); }
    double value_and_gradient(const ComplexMatrix& v, ComplexMatrix& grad) const { return evaluate(v, &grad); }

private:
    double evaluate(const ComplexMatrix& v, ComplexMatrix* grad) const {
        const std::size_t n = range_.rows();
        const std::size_t r = range_.cols();
        const std::size_t small = trace_a_ ? dims_.a : dims_.b;
        if (grad) *grad = ComplexMatrix(v.rows(), r);

        double total = 0.0;
        CVector u(n);
        ComplexMatrix sigma(small);
        for (std::size_t j = 0; j < v.rows(); ++j) {
            std::fill(u.begin(), u.end(), cplx{});
            for (std::size_t i = 0; i < r; ++i) {
                const cplx vji = v(j, i);
                for (std::size_t x = 0; x < n; ++x) u[x] += vji * range_(x, i);
            }
            // sigma = X X^dagger (A side) or X^T conj(X) (B side), X(a, b) = u[a*db + b].
            for (std::size_t s = 0; s < small; ++s)
                for (std::size_t t = s; t < small; ++t) {
                    cplx acc = 0.0;
                    if (trace_a_) {
                        for (std::size_t b = 0; b < dims_.b; ++b)
                            acc += u[dims_.index(s, b)] * std::conj(u[dims_.index(t, b)]);
                    } else {
                        for (std::size_t a = 0; a < dims_.a; ++a)
                            acc += u[dims_.index(a, s)] * std::conj(u[dims_.index(a, t)]);
                    }
                    sigma(s, t) = acc;
                    sigma(t, s) = std::conj(acc);
                }
            double p = 0.0;
            for (std::size_t s = 0; s < small; ++s) p += sigma(s, s).real();
            if (p <= 1e-300) continue;

            const EigenDecomposition eig = hermitian_eig(sigma);
            const double log_p = std::log2(p);
            double contribution = p * log_p;
            for (double mu : eig.values)
                if (mu > 0.0) contribution -= mu * std::log2(mu);
            total += contribution;
            if (!grad) continue;

            // L = -(log2 sigma - log2 p) on the reduced side.
            ComplexMatrix l = apply_spectral(eig, [&](double mu) {
                return -(std::log2(std::max(mu, std::numeric_limits<double>::min())) - log_p);
            });
            CVector g(n);
            for (std::size_t a = 0; a < dims_.a; ++a)
                for (std::size_t b = 0; b < dims_.b; ++b) {
                    cplx acc = 0.0;
                    if (trace_a_) {
                        for (std::size_t s = 0; s < dims_.a; ++s) acc += l(a, s) * u[dims_.index(s, b)];
                    } else {
                        for (std::size_t s = 0; s < dims_.b; ++s) acc += u[dims_.index(a, s)] * l(b, s);
                    }
                    g[dims_.index(a, b)] = acc;
                }
            for (std::size_t i = 0; i < r; ++i) {
                cplx acc = 0.0;
                for (std::size_t x = 0; x < n; ++x) acc += std::conj(range_(x, i)) * g[x];
                (*grad)(j, i) = acc;
            }
        }
        return total;
    }

    Dims dims_;
    ComplexMatrix range_;
    bool trace_a_;
};

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) acc += (std::conj(a.data()[i]) * b.data()[i]).real();
    return acc;
}

struct DescentOutcome {
    ComplexMatrix v;
    double value;
    bool converged;
};

// Conjugate-gradient descent on the unitary orbit V <- exp(t D) V with
// Armijo backtracking; D is anti-Hermitian k x k.
DescentOutcome descend(const EnsembleObjective& obj, ComplexMatrix v, const EfOptions& opt) {
    const std::size_t k = v.rows();
    ComplexMatrix grad;
    double f = obj.value_and_gradient(v, grad);
    if (obj.rank() == 1 || k == 1) return {std::move(v), f, true};

    auto direction_of = [&](const ComplexMatrix& g) {
        const ComplexMatrix p = v * g.adjoint();
        return p - p.adjoint();
    };
    ComplexMatrix steepest = direction_of(grad);
    ComplexMatrix dir = steepest;
    bool is_steepest = true;
    double theta = opt.initial_step;
    double sweep_start = f;
    bool converged = false;

    for (std::size_t iter = 1; iter <= opt.max_iterations; ++iter) {
        if (opt.deadline && (iter & 63) == 0 && std::chrono::steady_clock::now() > *opt.deadline)
            throw Error(ErrorKind::BudgetExceeded, "time budget exhausted during descent");

        double slope = 2.0 * real_inner((v * grad.adjoint()).adjoint(), dir);
        if (!(slope < 0.0)) {
            dir = steepest;
            is_steepest = true;
            slope = 2.0 * real_inner((v * grad.adjoint()).adjoint(), dir);
        }
        if (!(slope < -1e-300)) {
            converged = true;
            break;
        }

        // exp(t D) = W diag(exp(-i t w)) W^dagger with i D = W diag(w) W^dagger.
        const EigenDecomposition h = hermitian_eig((cplx{0.0, 1.0} * dir).hermitian_part());
        const double spec = std::max(std::abs(h.values.front()), std::abs(h.values.back()));
        const ComplexMatrix wd_v = h.vectors.adjoint() * v;

        bool accepted = false;
        ComplexMatrix v_new;
        double f_new = f;
        for (int trial = 0; trial < 60; ++trial) {
            const double t = theta / spec;
            ComplexMatrix rotated = wd_v;
            for (std::size_t m = 0; m < k; ++m) {
                const cplx phase = std::polar(1.0, -t * h.values[m]);
                for (std::size_t c = 0; c < rotated.cols(); ++c) rotated(m, c) *= phase;
            }
            v_new = h.vectors * rotated;
            f_new = obj.value(v_new);
            if (f_new <= f + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            theta *= 0.5;
            if (theta < 1e-14) break;
        }
        if (!accepted) {
            if (!is_steepest) {
                dir = steepest;
                is_steepest = true;
                theta = opt.initial_step;
                continue;
            }
            converged = true;
            break;
        }

        v = std::move(v_new);
        if (iter % 50 == 0) orthonormalize_columns(v);
        ComplexMatrix grad_new;
        f = obj.value_and_gradient(v, grad_new);
        const ComplexMatrix steepest_new = direction_of(grad_new);
        const double denom = real_inner(steepest, steepest);
        const double beta =
            denom > 0.0 ? std::max(0.0, real_inner(steepest_new, steepest_new - steepest) / denom) : 0.0;
        dir = steepest_new + beta * dir;
        is_steepest = beta == 0.0;
        steepest = steepest_new;
        grad = std::move(grad_new);
        theta = std::min(2.0 * theta, 1.0);

        if (iter % kSweepIterations == 0) {
            if (sweep_start - f < opt.sweep_tolerance) {
                converged = true;
                break;
            }
            sweep_start = f;
        }
    }
    return {std::move(v), f, converged};
}

ComplexMatrix identity_isometry(std::size_t k, std::size_t r) {
    ComplexMatrix v(k, r);
    for (std::size_t i = 0; i < r; ++i) v(i, i) = 1.0;
    return v;
}

}  // namespace

Ensemble ensemble_from_isometry(const BipartiteState& rho, const ComplexMatrix& v, double rank_epsilon) {
    return build_ensemble(rho, scaled_range(rho, rank_epsilon), v);
}

EfResult ef_minimize(const BipartiteState& rho, std::size_t k, std::size_t restarts, std::uint64_t seed) {
    EfOptions opt;
    opt.k = k;
    opt.restarts = restarts;
    opt.seed = seed;
    return ef_minimize(rho, opt);
}

EfResult ef_minimize(const BipartiteState& rho, const EfOptions& options) {
    const EnsembleObjective obj(rho.dims(), scaled_range(rho, options.rank_epsilon));
    const std::size_t r = obj.rank();
    const std::size_t k = options.k == 0 ? r * r : options.k;
    if (k < r) {
        throw Error(ErrorKind::KTooSmall,
                    "k = " + std::to_string(k) + " is below the rank " + std::to_string(r));
    }

    std::vector<ComplexMatrix> starts = options.warm_starts;
    for (const auto& w : starts) {
        if (w.rows() != k || w.cols() != r) throw Error(ErrorKind::DimensionMismatch, "warm start has the wrong shape");
        require_isometry(w);
    }
    const std::size_t warm = starts.size();
    const std::size_t seeded = std::max<std::size_t>(options.restarts, 1);

    std::vector<double> per_restart;
    std::size_t best_run = 0;
    std::optional<DescentOutcome> best;
    for (std::size_t run = 0; run < warm + seeded; ++run) {
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
            throw Error(ErrorKind::BudgetExceeded, "time budget exhausted before restart " + std::to_string(run));
        ComplexMatrix start;
        if (run < warm) {
            start = starts[run];
        } else if (run == warm) {
            start = identity_isometry(k, r);
        } else {
            Random rng(derive_seed(options.seed, run - warm));
            start = rng.isometry(k, r);
        }
        DescentOutcome out = descend(obj, std::move(start), options);
        per_restart.push_back(out.value);
        if (!best || out.value < best->value) {
            best = std::move(out);
            best_run = run;
        }
        // E_f >= 0, and a single restart covers every decomposition of a pure state.
        if (best->value <= 1e-14 || r == 1) break;
    }
    orthonormalize_columns(best->v);
    Ensemble ensemble = build_ensemble(rho, obj.range(), best->v);
    const double value = ensemble.average_entanglement();
    const std::size_t runs = per_restart.size();
    return EfResult{value,          std::move(ensemble), std::move(best->v),        k, runs, best_run,
                    best->converged, std::move(per_restart)};
}

double concurrence_2q(const BipartiteState& rho) {
    if (rho.dims() != Dims{2, 2}) throw Error(ErrorKind::DimensionNotTwoByTwo, "concurrence needs two qubits");
    const ComplexMatrix yy{{0, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}};
    const ComplexMatrix flipped = yy * rho.rho().conj() * yy;
    const ComplexMatrix root = apply_spectral(hermitian_eig(rho.rho()), [](double x) { return std::sqrt(std::max(x, 0.0)); });
    const EigenDecomposition eig = hermitian_eig((root * flipped * root).hermitian_part());
    std::vector<double> lam;
    for (double x : eig.values) lam.push_back(std::sqrt(std::max(x, 0.0)));
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double ef_oracle_2q(const BipartiteState& rho) {
    const double c = concurrence_2q(rho);
    const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    const double probs[] = {x, 1.0 - x};
    return shannon_bits(probs);
}

BipartiteState tensor_power(const BipartiteState& rho, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::DimensionZero, "tensor power needs n >= 1");
    if (n == 1) return rho;
    const Dims d = rho.dims();
    std::size_t da = 1, db = 1;
    for (std::size_t c = 0; c < n; ++c) {
        da *= d.a;
        db *= d.b;
    }
    const Dims out_dims{da, db};
    // Source index of regrouped (alpha, beta): copy c contributes digit a_c*b + b_c.
    std::vector<std::size_t> a_digits(da * n), b_digits(db * n);
    for (std::size_t x = 0; x < da; ++x) {
        std::size_t rem = x;
        for (std::size_t c = n; c-- > 0;) {
            a_digits[x * n + c] = rem % d.a;
            rem /= d.a;
        }
    }
    for (std::size_t y = 0; y < db; ++y) {
        std::size_t rem = y;
        for (std::size_t c = n; c-- > 0;) {
            b_digits[y * n + c] = rem % d.b;
            rem /= d.b;
        }
    }
    ComplexMatrix m(out_dims.total());
    for (std::size_t xa = 0; xa < da; ++xa)
        for (std::size_t xb = 0; xb < db; ++xb)
            for (std::size_t ya = 0; ya < da; ++ya)
                for (std::size_t yb = 0; yb < db; ++yb) {
                    cplx acc = 1.0;
                    for (std::size_t c = 0; c < n && acc != cplx{}; ++c) {
                        const std::size_t row = d.index(a_digits[xa * n + c], b_digits[xb * n + c]);
                        const std::size_t col = d.index(a_digits[ya * n + c], b_digits[yb * n + c]);
                        acc *= rho.rho()(row, col);
                    }
                    m(out_dims.index(xa, xb), out_dims.index(ya, yb)) = acc;
                }
    return BipartiteState::from_unnormalized(out_dims, m);
}

AdditivityTable additivity_explore(const BipartiteState& rho, std::size_t n_max, TimeBudget budget,
                                   const AdditivityOptions& options) {
    if (n_max < 1) throw Error(ErrorKind::DimensionZero, "n_max must be at least 1");
    std::size_t dim = 1;
    for (std::size_t c = 0; c < n_max; ++c) {
        dim *= rho.dims().total();
        if (dim > kMaxExplorerDimension) {
            throw Error(ErrorKind::CapExceeded,
                        "(dA*dB)^n exceeds " + std::to_string(kMaxExplorerDimension) +
                            "; an ensemble search over n copies of a rank-r state needs up to r^(2n) members");
        }
    }
    const auto deadline = std::chrono::steady_clock::now() + budget.limit;
    AdditivityTable table;
    table.k_cap = options.k_cap;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (std::chrono::steady_clock::now() > deadline) {
            table.budget_exceeded = true;
            break;
        }
        const BipartiteState power = n == 1 ? rho : tensor_power(rho, n);
        const std::size_t r = numerical_rank(power.rho());
        EfOptions opt;
        opt.k = std::max(r, std::min(r * r, options.k_cap));
        opt.restarts = options.restarts;
        opt.seed = options.seed;
        opt.deadline = deadline;
        try {
            const EfResult ef = ef_minimize(power, opt);
            table.rows.push_back({n, r, opt.k, ef.value, ef.value / static_cast<double>(n)});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            table.budget_exceeded = true;
            break;
        }
    }
    if (!table.rows.empty()) {
        const double single = table.rows.front().per_copy;
        for (const auto& row : table.rows)
            if (row.per_copy < single - 1e-4) table.subadditivity_evidence = true;
    }
    return table;
}

}  // namespace entrank
