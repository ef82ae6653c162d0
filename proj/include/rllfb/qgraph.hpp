#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rllfb/capacity.hpp"
#include "rllfb/constraint.hpp"
#include "rllfb/feedback_scheme.hpp"

namespace rllfb {

/// Output symbols are indexed 0 -> '0', 1 -> '?', 2 -> '1' (the ChannelOutput values).
inline constexpr int kNumOutputs = 3;

/// Deterministic output-driven graph: every node has one edge per output symbol.
struct QGraph {
    std::vector<std::array<int, kNumOutputs>> next;
    std::vector<std::string> labels;
    int initial = 0;

    int num_nodes() const { return static_cast<int>(next.size()); }
    int phi(int q, ChannelOutput y) const { return next[q][static_cast<int>(y)]; }
    /// Throws std::invalid_argument if an edge leaves the node set or the graph is not
    /// strongly connected.
    void validate() const;
    std::string serialize() const;
};

/// Nodes A_0..A_d (first cycle), A'_0..A'_d (repeat cycle), F_1..F_d (forced zeros).
QGraph build_q_graph_family(int d);
QGraph single_node_q_graph();

struct SQEdge {
    int from;
    int x;
    ChannelOutput y;
    double prob;  // P(y|x)
    int to;
};

/// Product of a constraint automaton and a Q-graph under the BEC law. Node (s,q) has
/// index s * num_q + q.
struct SQGraph {
    ConstraintAutomaton automaton;
    QGraph q_graph;
    double eps;
    std::vector<SQEdge> edges;

    int num_s() const { return automaton.num_states(); }
    int num_q() const { return q_graph.num_nodes(); }
    int num_nodes() const { return num_s() * num_q(); }
    int index(int s, int q) const { return s * num_q() + q; }
    std::string serialize() const;
};

SQGraph build_sq_graph(const ConstraintAutomaton& automaton, const QGraph& q, double eps);

/// P(x = 1 | s, q), stored s-major.
struct InputPolicy {
    int num_s = 0;
    int num_q = 0;
    std::vector<double> p1;

    static InputPolicy zeros(int num_s, int num_q) { return {num_s, num_q, std::vector<double>(num_s * num_q, 0.0)}; }
    double& at(int s, int q) { return p1[s * num_q + q]; }
    double at(int s, int q) const { return p1[s * num_q + q]; }
};

/// Throws std::invalid_argument if the policy has the wrong shape, leaves [0,1], or puts
/// mass on an input the constraint forbids.
void validate_policy(const SQGraph& sq, const InputPolicy& policy);

struct ChainAnalysis {
    std::vector<std::vector<int>> classes;  // communicating classes of the positive-probability chain
    std::vector<bool> closed;
    int period = 0;                         // period of the closed class when there is exactly one
    bool in_omega = false;                  // exactly one closed class
    bool aperiodic = false;
    std::vector<double> pi;                 // empty unless in_omega && aperiodic
    double residual = 0.0;                  // max |pi P - pi|

    bool has_pi() const { return !pi.empty(); }
};

/// Dense transition matrix over (s,q) induced by a policy, row-major.
std::vector<double> transition_matrix(const SQGraph& sq, const InputPolicy& policy);

ChainAnalysis analyze_chain(const SQGraph& sq, const InputPolicy& policy);

/// I(X;Y|Q) in bits under the stationary distribution. Throws std::domain_error when
/// the policy lies outside Omega or gives a periodic chain.
double conditional_mutual_information(const SQGraph& sq, const InputPolicy& policy);
/// Per-node terms I(X;Y|Q=q); entries for nodes of zero stationary mass are 0.
std::vector<double> conditional_mutual_information_terms(const SQGraph& sq, const InputPolicy& policy);

struct BoundOptions {
    int restarts = 8;
    double tol = 1e-6;
    int max_sweeps = 2000;
    std::uint64_t seed = 1;
    std::vector<InputPolicy> warm_starts;
};

struct BoundResult {
    double value = 0.0;
    InputPolicy policy;
    int sweeps = 0;
    bool converged = false;
};

/// Coordinate ascent on the free entries of P(x=1|s,q), one golden-section search per
/// coordinate. Warm starts run first, then random restarts; iterates outside Omega or
/// with periodic chains score -infinity.
BoundResult optimize_upper_bound(const SQGraph& sq, const BoundOptions& options = {});

/// Transmit probabilities of the coding scheme given the family node and s = d:
/// A_i -> delta_i / (1 - sum_{j<i} delta_j), A'_i -> delta_i / (delta_i + 1 - sum delta),
/// 1 where the denominator vanishes, 0 at forced-zero nodes and at s < d.
InputPolicy scheme_induced_policy(const SplitVector& delta, int d);

struct BcjrCheck {
    bool holds = false;
    double max_residual = 0.0;
};

/// Compares P(s' | q, y) with P(s' | q') = pi(s',q') / pi(q') over every (q, y) of positive
/// stationary flow. Holds iff the largest gap is at most 1e-9.
BcjrCheck check_bcjr_invariance(const SQGraph& sq, const InputPolicy& policy);

}  // namespace rllfb
