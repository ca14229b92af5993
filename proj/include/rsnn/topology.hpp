#pragma once

#include "rsnn/neuron.hpp"

#include <optional>
#include <vector>

namespace rsnn {

// Zero-sum sign vector; odd lengths carry exactly one zero entry.
struct SignVector {
    std::vector<int> entries;

    int size() const { return static_cast<int>(entries.size()); }
    void validate() const;
};

// Dense signed adjacency, row-major; zero diagonal for all constructions
// used here.
struct AdjacencyMatrix {
    int n = 0;
    std::vector<double> entries; // n*n, row-major

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
    static AdjacencyMatrix zeros(int n);
    bool is_symmetric(double tol = 0.0) const;
    bool is_integer() const;
};

struct EigenPair {
    double eigenvalue = 0.0;
    std::vector<double> right_eigenvector;
    std::vector<double> left_eigenvector;
    bool degenerate = false; // dominant eigenvalue tied within tolerance
};

struct SWTAConfig {
    int num_clusters = 16;
    int neurons_per_cluster = 8;
    double self_excitation = 1.0;    // within-cluster E->E, scaled by gain
    double lateral_excitation = 0.5; // nearest-neighbor E->E, scaled by gain
    double exc_to_inh = 1.0;         // not scaled by gain
    double inh_to_exc = -1.0;        // negative, not scaled by gain
    int num_inhibitory = 32;
    double gain_alpha = 0.0;
    bool periodic = false; // ring instead of truncated line

    void validate() const;
};

enum class NeuronRole : unsigned char { excitatory = 0, inhibitory = 1 };

// Concrete synaptic network: weight(post, pre), per-neuron parameters,
// roles, shared synaptic filter constants.
struct WeightedNetwork {
    int n = 0;
    std::vector<double> weights; // n*n row-major, weight(post, pre)
    std::vector<NeuronParams> neuron_params;
    std::vector<NeuronRole> roles;
    SynapseParams synapse;

    double weight(int post, int pre) const {
        return weights[static_cast<std::size_t>(post) * n + pre];
    }
    double& weight(int post, int pre) {
        return weights[static_cast<std::size_t>(post) * n + pre];
    }
    int num_excitatory() const;
    void validate() const;
};

// A = diag(v) (J - I) diag(v): zero diagonal, A_ij = sign(v_i v_j), and
// A v = (nnz(v) - 1) v.
AdjacencyMatrix build_mixed_feedback_adjacency(const SignVector& v);

// Dominant (largest real part) eigenpair by shifted power iteration, with an
// exact integer path when the converged vector snaps onto a {-1,0,1} pattern
// of an integer matrix. Eigenvectors have unit norm and a positive first
// nonzero entry.
EigenPair dominant_eigenpair(const AdjacencyMatrix& A);

// Structural balance: true iff diag(s) A diag(s) >= 0 entrywise for some
// sign vector s, found by 2-coloring the signed graph.
struct CertificationResult {
    bool certified = false;
    std::optional<std::vector<int>> gauge;
};

CertificationResult certify_positive_feedback(const AdjacencyMatrix& A);

WeightedNetwork build_swta(const SWTAConfig& config,
                           const NeuronParams& params = NeuronParams{},
                           const SynapseParams& synapse = SynapseParams{});

// weights = alpha * unit_weight * A; every neuron keeps the full signed row,
// so single units may both excite and inhibit.
WeightedNetwork scale_network(const AdjacencyMatrix& A, double alpha,
                              double unit_weight,
                              const NeuronParams& params = NeuronParams{},
                              const SynapseParams& synapse = SynapseParams{});

// Zero-sum ±1 vector orthogonal to v. Returns the alternating pattern
// (-1,+1,-1,...) whenever it qualifies. For sizes where no zero-sum solution
// exists (N ≡ 2 mod 4) the result is orthogonal but not zero-sum and is
// flagged degenerate.
struct OrthogonalPattern {
    std::vector<int> signs;
    bool zero_sum = false;
};

OrthogonalPattern orthogonal_sign_vector(const SignVector& v);

} // namespace rsnn
