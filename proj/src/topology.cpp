#include "rsnn/topology.hpp"

#include "rsnn/errors.hpp"
#include "rsnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>

namespace rsnn {

void SignVector::validate() const {
    const int n = size();
    if (n < 2)
        throw ParameterError("sign vector needs at least 2 entries");
    int sum = 0;
    int zeros = 0;
    for (int e : entries) {
        if (e != -1 && e != 0 && e != 1)
            throw ParameterError("sign vector entries must be -1, 0 or +1");
        if (e == 0) ++zeros;
        sum += e;
    }
    if (sum != 0)
        throw ParameterError("sign vector must sum to zero");
    const int allowed_zeros = (n % 2 == 0) ? 0 : 1;
    if (zeros != allowed_zeros)
        throw ParameterError("sign vector needs exactly " +
                             std::to_string(allowed_zeros) + " zero entries");
}

AdjacencyMatrix AdjacencyMatrix::zeros(int n) {
    AdjacencyMatrix A;
    A.n = n;
    A.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    return A;
}

bool AdjacencyMatrix::is_symmetric(double tol) const {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    return true;
}

bool AdjacencyMatrix::is_integer() const {
    for (double e : entries)
        if (e != std::floor(e) || std::abs(e) > 1e15) return false;
    return true;
}

void SWTAConfig::validate() const {
    if (num_clusters < 1 || neurons_per_cluster < 1 || num_inhibitory < 1)
        throw ParameterError("swta counts must be >= 1");
    if (!(inh_to_exc < 0.0))
        throw ParameterError("inh_to_exc must be negative");
    if (gain_alpha < 0.0)
        throw ParameterError("gain_alpha must be >= 0");
    if (self_excitation < 0.0 || lateral_excitation < 0.0 || exc_to_inh < 0.0)
        throw ParameterError("excitatory weights must be >= 0");
}

int WeightedNetwork::num_excitatory() const {
    return static_cast<int>(
        std::count(roles.begin(), roles.end(), NeuronRole::excitatory));
}

void WeightedNetwork::validate() const {
    if (n <= 0)
        throw ParameterError("network must have at least one neuron");
    if (weights.size() != static_cast<std::size_t>(n) * n ||
        neuron_params.size() != static_cast<std::size_t>(n) ||
        roles.size() != static_cast<std::size_t>(n))
        throw ParameterError("inconsistent network dimensions");
    for (double w : weights)
        if (!std::isfinite(w))
            throw NumericalError("network weights must be finite");
    for (const auto& p : neuron_params) p.validate();
    synapse.validate();
}

AdjacencyMatrix build_mixed_feedback_adjacency(const SignVector& v) {
    v.validate();
    const int n = v.size();
    AdjacencyMatrix A = AdjacencyMatrix::zeros(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) A.at(i, j) = static_cast<double>(v.entries[i] * v.entries[j]);
    return A;
}

namespace {

constexpr int kPowerIterationCap = 200000;
constexpr double kConvergenceTol = 1e-13;
constexpr double kDegeneracyTol = 1e-8;

double norm2(const std::vector<double>& x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

void normalize_with_sign(std::vector<double>& x) {
    const double nrm = norm2(x);
    if (nrm == 0.0) return;
    double lead = 0.0;
    for (double e : x) {
        if (std::abs(e) > 1e-12 * nrm) {
            lead = e;
            break;
        }
    }
    const double scale = (lead < 0.0 ? -1.0 : 1.0) / nrm;
    for (double& e : x) e *= scale;
}

// y = (A + shift I) x, row-major, fixed accumulation order
void apply_shifted(const AdjacencyMatrix& A, double shift,
                   const std::vector<double>& x, std::vector<double>& y) {
    const int n = A.n;
    for (int i = 0; i < n; ++i) {
        double acc = shift * x[static_cast<std::size_t>(i)];
        const double* row = &A.entries[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j) acc += row[j] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
}

// Power iteration on A + shift I from a fixed pseudorandom start. Returns
// the unshifted eigenvalue estimate; throws if the cap is reached without
// the residual settling.
double power_iterate(const AdjacencyMatrix& A, double shift, bool transpose,
                     std::vector<double>& x) {
    const int n = A.n;
    AdjacencyMatrix AT;
    const AdjacencyMatrix* M = &A;
    if (transpose) {
        AT = AdjacencyMatrix::zeros(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) AT.at(i, j) = A.at(j, i);
        M = &AT;
    }

    Rng rng = make_rng(0x5eedu, Stream::init);
    x.assign(static_cast<std::size_t>(n), 0.0);
    for (double& e : x) e = 1.0 + 0.25 * rng.uniform01();
    double nrm = norm2(x);
    for (double& e : x) e /= nrm;

    std::vector<double> y(static_cast<std::size_t>(n));
    double lambda_shifted = 0.0;
    for (int it = 0; it < kPowerIterationCap; ++it) {
        apply_shifted(*M, shift, x, y);
        lambda_shifted = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
        const double ynrm = norm2(y);
        if (ynrm == 0.0) return -shift; // annihilated: eigenvalue exactly -shift
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = y[static_cast<std::size_t>(i)] -
                             lambda_shifted * x[static_cast<std::size_t>(i)];
            resid += r * r;
        }
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] =
            y[static_cast<std::size_t>(i)] / ynrm;
        if (std::sqrt(resid) <= kConvergenceTol * std::max(1.0, std::abs(lambda_shifted)))
            return lambda_shifted - shift;
    }
    throw NumericalError("power iteration did not converge");
}

// Rayleigh-quotient estimate after a fixed iteration budget; used only for
// tie reporting, so it never throws on slow convergence.
double rayleigh_estimate(const AdjacencyMatrix& A, double shift, int iterations) {
    const int n = A.n;
    Rng rng = make_rng(0x5eedu, Stream::init, 1);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& e : x) e = 1.0 + 0.25 * rng.uniform01();
    double nrm = norm2(x);
    for (double& e : x) e /= nrm;
    std::vector<double> y(static_cast<std::size_t>(n));
    double lambda_shifted = 0.0;
    for (int it = 0; it < iterations; ++it) {
        apply_shifted(A, shift, x, y);
        lambda_shifted = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
        const double ynrm = norm2(y);
        if (ynrm == 0.0) return -shift;
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / ynrm;
    }
    return lambda_shifted - shift;
}

// Try to read the converged vector as an exact {-1,0,1} eigenvector of an
// integer matrix; on success the eigenvalue is exact.
bool integer_snap(const AdjacencyMatrix& A, const std::vector<double>& x,
                  std::vector<int>& pattern, std::int64_t& eigenvalue) {
    const int n = A.n;
    double vmax = 0.0;
    for (double e : x) vmax = std::max(vmax, std::abs(e));
    if (vmax == 0.0) return false;
    pattern.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const double r = x[static_cast<std::size_t>(i)] / vmax;
        if (std::abs(r) < 0.1)
            pattern[static_cast<std::size_t>(i)] = 0;
        else if (std::abs(std::abs(r) - 1.0) < 1e-6)
            pattern[static_cast<std::size_t>(i)] = r > 0.0 ? 1 : -1;
        else
            return false;
    }
    // A * pattern must equal k * pattern exactly in integer arithmetic
    std::int64_t k = 0;
    bool k_set = false;
    for (int i = 0; i < n; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < n; ++j)
            acc += static_cast<std::int64_t>(A.at(i, j)) *
                   pattern[static_cast<std::size_t>(j)];
        const int pi = pattern[static_cast<std::size_t>(i)];
        if (pi == 0) {
            if (acc != 0) return false;
            continue;
        }
        if (acc % pi != 0) return false;
        const std::int64_t ki = acc / pi;
        if (!k_set) {
            k = ki;
            k_set = true;
        } else if (ki != k) {
            return false;
        }
    }
    if (!k_set) return false;
    eigenvalue = k;
    return true;
}

} // namespace

EigenPair dominant_eigenpair(const AdjacencyMatrix& A) {
    if (A.n <= 0 || A.entries.size() != static_cast<std::size_t>(A.n) * A.n)
        throw ParameterError("adjacency matrix must be square and non-empty");
    for (double e : A.entries)
        if (!std::isfinite(e))
            throw NumericalError("adjacency entries must be finite");

    const int n = A.n;
    EigenPair result;

    bool all_zero = true;
    for (double e : A.entries)
        if (e != 0.0) { all_zero = false; break; }
    if (all_zero) {
        result.eigenvalue = 0.0;
        result.right_eigenvector.assign(static_cast<std::size_t>(n), 0.0);
        result.right_eigenvector[0] = 1.0;
        result.left_eigenvector = result.right_eigenvector;
        result.degenerate = true;
        return result;
    }

    // Gershgorin shift keeps the target eigenvalue strictly dominant in
    // magnitude for real spectra.
    double max_abs_row = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(A.at(i, j));
        max_abs_row = std::max(max_abs_row, s);
    }
    const double shift = max_abs_row + 1.0;

    std::vector<double> right;
    double lambda = power_iterate(A, shift, false, right);

    // exact integer path
    std::vector<int> snapped;
    std::int64_t exact = 0;
    if (A.is_integer() && integer_snap(A, right, snapped, exact)) {
        lambda = static_cast<double>(exact);
        for (int i = 0; i < n; ++i)
            right[static_cast<std::size_t>(i)] =
                static_cast<double>(snapped[static_cast<std::size_t>(i)]);
    }
    normalize_with_sign(right);

    const bool symmetric = A.is_symmetric(0.0);
    std::vector<double> left;
    if (symmetric) {
        left = right;
    } else {
        double lambda_left = power_iterate(A, shift, true, left);
        if (std::abs(lambda_left - lambda) > 1e-6 * std::max(1.0, std::abs(lambda)))
            throw NumericalError("left/right dominant eigenvalues disagree");
        normalize_with_sign(left);
    }

    // Tie check via one deflation pass (symmetric case only: deflation with
    // the unit eigenvector is exact there).
    bool degenerate = false;
    if (symmetric) {
        AdjacencyMatrix D = A;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                D.at(i, j) -= lambda * right[static_cast<std::size_t>(i)] *
                              right[static_cast<std::size_t>(j)];
        const double lambda2 = rayleigh_estimate(D, shift, 3000);
        if (std::abs(lambda2 - lambda) <= kDegeneracyTol * std::max(1.0, std::abs(lambda)))
            degenerate = true;
    }

    result.eigenvalue = lambda;
    result.right_eigenvector = std::move(right);
    result.left_eigenvector = std::move(left);
    result.degenerate = degenerate;
    return result;
}

CertificationResult certify_positive_feedback(const AdjacencyMatrix& A) {
    if (A.n <= 0 || A.entries.size() != static_cast<std::size_t>(A.n) * A.n)
        throw ParameterError("adjacency matrix must be square and non-empty");
    const int n = A.n;

    // 2-color the signed graph of nonzero couplings: same color across
    // positive edges, opposite across negative ones.
    std::vector<int> color(static_cast<std::size_t>(n), 0);
    for (int start = 0; start < n; ++start) {
        if (color[static_cast<std::size_t>(start)] != 0) continue;
        color[static_cast<std::size_t>(start)] = 1;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            const int i = queue.front();
            queue.pop_front();
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double wij = A.at(i, j);
                const double wji = A.at(j, i);
                double sign = 0.0;
                if (wij != 0.0) sign = wij;
                else if (wji != 0.0) sign = wji;
                else continue;
                const int want = sign > 0.0 ? color[static_cast<std::size_t>(i)]
                                            : -color[static_cast<std::size_t>(i)];
                int& cj = color[static_cast<std::size_t>(j)];
                if (cj == 0) {
                    cj = want;
                    queue.push_back(j);
                } else if (cj != want) {
                    return {false, std::nullopt};
                }
            }
        }
    }

    // The coloring only looked at one representative sign per pair; verify
    // the gauge against every entry (covers asymmetric sign conflicts and
    // nonzero diagonals).
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (color[static_cast<std::size_t>(i)] * A.at(i, j) *
                    color[static_cast<std::size_t>(j)] < 0.0)
                return {false, std::nullopt};

    if (color[0] < 0)
        for (int& c : color) c = -c;
    return {true, color};
}

WeightedNetwork build_swta(const SWTAConfig& config, const NeuronParams& params,
                           const SynapseParams& synapse) {
    config.validate();
    params.validate();
    synapse.validate();
    const int ne = config.num_clusters * config.neurons_per_cluster;
    const int n = ne + config.num_inhibitory;

    WeightedNetwork net;
    net.n = n;
    net.weights.assign(static_cast<std::size_t>(n) * n, 0.0);
    net.neuron_params.assign(static_cast<std::size_t>(n), params);
    net.roles.assign(static_cast<std::size_t>(n), NeuronRole::excitatory);
    net.synapse = synapse;
    for (int i = ne; i < n; ++i)
        net.roles[static_cast<std::size_t>(i)] = NeuronRole::inhibitory;

    const auto cluster_of = [&](int i) { return i / config.neurons_per_cluster; };
    const int nc = config.num_clusters;

    for (int post = 0; post < ne; ++post) {
        const int cp = cluster_of(post);
        for (int pre = 0; pre < ne; ++pre) {
            if (pre == post) continue;
            const int cq = cluster_of(pre);
            int dist = std::abs(cp - cq);
            if (config.periodic) dist = std::min(dist, nc - dist);
            if (dist == 0)
                net.weight(post, pre) = config.gain_alpha * config.self_excitation;
            else if (dist == 1)
                net.weight(post, pre) = config.gain_alpha * config.lateral_excitation;
        }
    }
    // inhibitory pathway is not gain-scaled
    for (int post = ne; post < n; ++post)
        for (int pre = 0; pre < ne; ++pre)
            net.weight(post, pre) = config.exc_to_inh;
    for (int post = 0; post < ne; ++post)
        for (int pre = ne; pre < n; ++pre)
            net.weight(post, pre) = config.inh_to_exc;

    net.validate();
    return net;
}

WeightedNetwork scale_network(const AdjacencyMatrix& A, double alpha,
                              double unit_weight, const NeuronParams& params,
                              const SynapseParams& synapse) {
    if (alpha < 0.0)
        throw ParameterError("alpha must be >= 0");
    params.validate();
    synapse.validate();
    WeightedNetwork net;
    net.n = A.n;
    net.weights.resize(static_cast<std::size_t>(A.n) * A.n);
    for (std::size_t k = 0; k < A.entries.size(); ++k) {
        const double w = alpha * unit_weight * A.entries[k];
        net.weights[k] = w == 0.0 ? 0.0 : w; // canonicalize -0 for hashing
    }
    net.neuron_params.assign(static_cast<std::size_t>(A.n), params);
    net.roles.assign(static_cast<std::size_t>(A.n), NeuronRole::excitatory);
    net.synapse = synapse;
    net.validate();
    return net;
}

OrthogonalPattern orthogonal_sign_vector(const SignVector& v) {
    v.validate();
    const int n = v.size();
    if (n % 2 != 0)
        throw ParameterError("orthogonal sign vector requires even length");

    const auto dot = [&](const std::vector<int>& w) {
        int d = 0;
        for (int i = 0; i < n; ++i) d += w[static_cast<std::size_t>(i)] * v.entries[static_cast<std::size_t>(i)];
        return d;
    };
    const auto sum = [&](const std::vector<int>& w) {
        int s = 0;
        for (int e : w) s += e;
        return s;
    };

    // alternating pattern first (matches the canonical C symbol)
    std::vector<int> alt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) alt[static_cast<std::size_t>(i)] = (i % 2 == 0) ? -1 : 1;
    if (dot(alt) == 0)
        return {alt, sum(alt) == 0};

    // otherwise balance the +1 and -1 positions of v separately; zero-sum
    // solutions need both position groups to split evenly (n divisible by 4)
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    if (n % 4 == 0) {
        int plus_seen = 0;
        int minus_seen = 0;
        const int half = n / 4;
        for (int i = 0; i < n; ++i) {
            if (v.entries[static_cast<std::size_t>(i)] > 0)
                w[static_cast<std::size_t>(i)] = (plus_seen++ < half) ? 1 : -1;
            else
                w[static_cast<std::size_t>(i)] = (minus_seen++ < half) ? 1 : -1;
        }
        return {w, true};
    }

    // n ≡ 2 (mod 4): orthogonal exists but cannot be zero-sum; flip the sign
    // of v's -1 positions
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = 1;
    if (dot(w) != 0)
        throw ParameterError("no orthogonal sign vector found");
    return {w, false};
}

} // namespace rsnn
