#include "rsnn/rate_model.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsnn {

void RateModel::validate() const {
    if (time_constant_ms <= 0.0)
        throw ParameterError("time_constant must be > 0");
    if (gain <= 0.0)
        throw ParameterError("gain must be > 0");
    if (alpha < 0.0)
        throw ParameterError("alpha must be >= 0");
    const auto n = static_cast<std::size_t>(adjacency.n);
    if (adjacency.n <= 0 || adjacency.entries.size() != n * n)
        throw ParameterError("adjacency must be square");
    if (bias.size() != n || input.size() != n)
        throw ParameterError("bias and input must match the adjacency size");
}

namespace {

// phi(alpha A nu + bias + input), fixed accumulation order
void activation(const RateModel& m, const std::vector<double>& nu,
                std::vector<double>& out) {
    const int n = m.adjacency.n;
    for (int i = 0; i < n; ++i) {
        double drive = 0.0;
        const double* row = &m.adjacency.entries[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) drive += row[j] * nu[static_cast<std::size_t>(j)];
        drive = m.alpha * drive + m.bias[static_cast<std::size_t>(i)] +
                m.input[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = drive > 0.0 ? m.gain * drive : 0.0;
    }
}

} // namespace

std::vector<double> rate_dynamics_step(const std::vector<double>& state,
                                       const RateModel& model, double dt_ms) {
    model.validate();
    if (static_cast<int>(state.size()) != model.size())
        throw ParameterError("state size does not match model");
    if (!(dt_ms > 0.0) || dt_ms >= model.time_constant_ms / 5.0)
        throw ParameterError("dt must lie in (0, time_constant/5)");

    std::vector<double> phi(state.size());
    activation(model, state, phi);
    std::vector<double> next(state.size());
    const double r = dt_ms / model.time_constant_ms;
    for (std::size_t i = 0; i < state.size(); ++i) {
        next[i] = state[i] + r * (phi[i] - state[i]);
        if (!std::isfinite(next[i]))
            throw NumericalError("rate dynamics became non-finite");
    }
    return next;
}

FixedPointResult find_fixed_points(
    const RateModel& model,
    const std::vector<std::vector<double>>& initial_conditions, double damping,
    int max_iterations) {
    model.validate();
    if (initial_conditions.empty())
        throw ParameterError("need at least one initial condition");
    if (!(damping > 0.0 && damping <= 1.0))
        throw ParameterError("damping must lie in (0, 1]");

    FixedPointResult result;
    const std::size_t n = static_cast<std::size_t>(model.size());

    for (std::size_t ic = 0; ic < initial_conditions.size(); ++ic) {
        if (initial_conditions[ic].size() != n)
            throw ParameterError("initial condition size mismatch");
        std::vector<double> nu = initial_conditions[ic];
        std::vector<double> phi(n);
        bool converged = false;
        for (int it = 0; it < max_iterations; ++it) {
            activation(model, nu, phi);
            double delta2 = 0.0;
            double norm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = phi[i] - nu[i];
                delta2 += d * d;
                norm2 += nu[i] * nu[i];
                nu[i] += damping * d;
                if (!std::isfinite(nu[i]))
                    throw NumericalError("fixed-point iteration diverged");
            }
            // 1e-12 relative: near the critical gain the iterate creeps, and
            // a looser stop would freeze it visibly short of the fixed point
            if (std::sqrt(delta2) < 1e-12 * std::max(1e-300, std::sqrt(norm2))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            result.unconverged.push_back(static_cast<int>(ic));
            continue;
        }
        const bool duplicate = std::any_of(
            result.fixed_points.begin(), result.fixed_points.end(),
            [&](const std::vector<double>& fp) {
                double d2 = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    d2 += (fp[i] - nu[i]) * (fp[i] - nu[i]);
                return std::sqrt(d2) <= 1e-6;
            });
        if (!duplicate) result.fixed_points.push_back(std::move(nu));
    }
    return result;
}

namespace {

// Solve M x = rhs by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_linear(std::vector<double> M,
                                                std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    const auto at = [&](int i, int j) -> double& {
        return M[static_cast<std::size_t>(i) * n + j];
    };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (std::abs(at(pivot, col)) < 1e-12) return std::nullopt;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
            std::swap(rhs[static_cast<std::size_t>(pivot)],
                      rhs[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) at(r, j) -= f * at(col, j);
            rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = rhs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc / at(i, i);
    }
    return x;
}

} // namespace

std::optional<double> predict_critical_alpha(const RateModel& model) {
    model.validate();
    const EigenPair eig = dominant_eigenpair(model.adjacency);
    if (eig.eigenvalue <= 0.0)
        throw ParameterError("dominant eigenvalue must be positive");

    // The closed form needs the interior fixed point of
    // nu = gain (alpha A nu + b + u): solve (I - gain alpha A) nu = gain(b+u)
    // and require every unit strictly active there.
    const int n = model.size();
    std::vector<double> M(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            M[static_cast<std::size_t>(i) * n + j] =
                (i == j ? 1.0 : 0.0) - model.gain * model.alpha * model.adjacency.at(i, j);
        rhs[static_cast<std::size_t>(i)] =
            model.gain * (model.bias[static_cast<std::size_t>(i)] +
                          model.input[static_cast<std::size_t>(i)]);
    }
    const auto sym = solve_linear(std::move(M), std::move(rhs));
    if (!sym) return std::nullopt;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc += model.adjacency.at(i, j) * (*sym)[static_cast<std::size_t>(j)];
        const double drive = model.alpha * acc + model.bias[static_cast<std::size_t>(i)] +
                             model.input[static_cast<std::size_t>(i)];
        if (drive <= 0.0) return std::nullopt; // on or past the kink
    }
    return 1.0 / (model.gain * eig.eigenvalue);
}

double centered_projection(const std::vector<double>& rates,
                           const std::vector<int>& v) {
    if (rates.empty() || rates.size() != v.size())
        throw ParameterError("projection needs matching nonzero sizes");
    const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) /
                        static_cast<double>(rates.size());
    double vnorm = 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        vnorm += static_cast<double>(v[i] * v[i]);
        dot += static_cast<double>(v[i]) * (rates[i] - mean);
    }
    if (vnorm == 0.0)
        throw ParameterError("projection vector must be nonzero");
    return dot / std::sqrt(vnorm);
}

} // namespace rsnn
