#include "rllfb/qgraph.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace rllfb {

namespace {

constexpr ChannelOutput kOutputs[kNumOutputs] = {ChannelOutput::Zero, ChannelOutput::Erasure,
                                                 ChannelOutput::One};

// Tarjan's strongly connected components over an adjacency list.
std::vector<std::vector<int>> strongly_connected(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> out;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.edge < adj[f.v].size()) {
                const int w = adj[f.v][f.edge++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const int v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::vector<std::vector<int>> positive_adjacency(const std::vector<double>& p, int n) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p[i * n + j] > 0.0) adj[i].push_back(j);
    return adj;
}

double policy_x_prob(const InputPolicy& policy, int node, int x) {
    const double p = policy.p1[node];
    return x == 1 ? p : 1.0 - p;
}

}  // namespace

void QGraph::validate() const {
    const int n = num_nodes();
    if (n == 0) throw std::invalid_argument("QGraph: no nodes");
    if (initial < 0 || initial >= n) throw std::invalid_argument("QGraph: initial node out of range");
    std::vector<std::vector<int>> adj(n);
    for (int q = 0; q < n; ++q)
        for (int y = 0; y < kNumOutputs; ++y) {
            const int t = next[q][y];
            if (t < 0 || t >= n) throw std::invalid_argument("QGraph: edge leaves the node set");
            adj[q].push_back(t);
        }
    if (strongly_connected(adj).size() != 1) throw std::invalid_argument("QGraph: not irreducible");
}

std::string QGraph::serialize() const {
    std::ostringstream os;
    for (int q = 0; q < num_nodes(); ++q) os << "node " << q << '\n';
    for (int q = 0; q < num_nodes(); ++q)
        for (auto y : kOutputs) os << "edge " << q << ' ' << to_char(y) << ' ' << phi(q, y) << '\n';
    return os.str();
}

QGraph build_q_graph_family(int d) {
    if (d < 0) throw std::invalid_argument("build_q_graph_family: negative d");
    const int n = 3 * d + 2;
    auto first = [](int i) { return i; };
    auto repeat = [d](int i) { return d + 1 + i; };
    auto forced = [d](int j) { return 2 * d + 1 + j; };  // j = 1..d
    const int after_one = d > 0 ? forced(1) : first(0);

    QGraph g;
    g.next.resize(n);
    g.labels.resize(n);
    for (int i = 0; i <= d; ++i) {
        g.labels[first(i)] = "A" + std::to_string(i);
        g.labels[repeat(i)] = "A'" + std::to_string(i);
        g.next[first(i)] = {first(0), i < d ? first(i + 1) : repeat(0), after_one};
        g.next[repeat(i)] = {first(0), i < d ? repeat(i + 1) : repeat(0), after_one};
    }
    for (int j = 1; j <= d; ++j) {
        const int to = j < d ? forced(j + 1) : first(0);
        g.labels[forced(j)] = "F" + std::to_string(j);
        g.next[forced(j)] = {to, to, to};
    }
    g.initial = first(0);
    return g;
}

QGraph single_node_q_graph() {
    QGraph g;
    g.next = {{0, 0, 0}};
    g.labels = {"Q"};
    return g;
}

SQGraph build_sq_graph(const ConstraintAutomaton& automaton, const QGraph& q, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("build_sq_graph: eps outside [0,1]");
    q.validate();
    SQGraph sq{automaton, q, eps, {}};
    for (int s = 0; s < automaton.num_states(); ++s)
        for (int node = 0; node < q.num_nodes(); ++node)
            for (int x = 0; x <= 1; ++x) {
                const int s2 = automaton.next(s, x);
                if (s2 < 0) continue;
                const ChannelOutput clean = x ? ChannelOutput::One : ChannelOutput::Zero;
                if (eps < 1.0) sq.edges.push_back({sq.index(s, node), x, clean, 1.0 - eps, sq.index(s2, q.phi(node, clean))});
                if (eps > 0.0)
                    sq.edges.push_back({sq.index(s, node), x, ChannelOutput::Erasure, eps,
                                        sq.index(s2, q.phi(node, ChannelOutput::Erasure))});
            }
    return sq;
}

std::string SQGraph::serialize() const {
    std::ostringstream os;
    os.precision(17);
    for (int s = 0; s < num_s(); ++s)
        for (int q = 0; q < num_q(); ++q) os << "node " << s << ',' << q << '\n';
    for (const auto& e : edges)
        os << "edge " << e.from / num_q() << ',' << e.from % num_q() << ' ' << e.x << ',' << to_char(e.y) << ','
           << e.prob << ' ' << e.to / num_q() << ',' << e.to % num_q() << '\n';
    return os.str();
}

void validate_policy(const SQGraph& sq, const InputPolicy& policy) {
    if (policy.num_s != sq.num_s() || policy.num_q != sq.num_q() ||
        static_cast<int>(policy.p1.size()) != sq.num_nodes())
        throw std::invalid_argument("InputPolicy: shape does not match the product graph");
    for (int s = 0; s < sq.num_s(); ++s)
        for (int q = 0; q < sq.num_q(); ++q) {
            const double p = policy.at(s, q);
            if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("InputPolicy: probability outside [0,1]");
            if (p > 0.0 && !sq.automaton.allows(s, 1))
                throw std::invalid_argument("InputPolicy: mass on a forbidden 1");
            if (p < 1.0 && !sq.automaton.allows(s, 0))
                throw std::invalid_argument("InputPolicy: mass on a forbidden 0");
        }
}

std::vector<double> transition_matrix(const SQGraph& sq, const InputPolicy& policy) {
    validate_policy(sq, policy);
    const int n = sq.num_nodes();
    std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& e : sq.edges) p[e.from * n + e.to] += policy_x_prob(policy, e.from, e.x) * e.prob;
    return p;
}

ChainAnalysis analyze_chain(const SQGraph& sq, const InputPolicy& policy) {
    const int n = sq.num_nodes();
    const auto p = transition_matrix(sq, policy);
    const auto adj = positive_adjacency(p, n);

    ChainAnalysis a;
    a.classes = strongly_connected(adj);
    std::vector<int> class_of(n);
    for (std::size_t c = 0; c < a.classes.size(); ++c)
        for (int v : a.classes[c]) class_of[v] = static_cast<int>(c);
    a.closed.assign(a.classes.size(), true);
    for (int v = 0; v < n; ++v)
        for (int w : adj[v])
            if (class_of[w] != class_of[v]) a.closed[class_of[v]] = false;
    const auto closed_count = std::count(a.closed.begin(), a.closed.end(), true);
    a.in_omega = closed_count == 1;
    if (!a.in_omega) return a;

    const auto& cls = a.classes[std::find(a.closed.begin(), a.closed.end(), true) - a.closed.begin()];
    // Period: gcd of level differences along edges of a BFS tree inside the class.
    std::vector<int> level(n, -1);
    std::vector<int> queue{cls.front()};
    level[cls.front()] = 0;
    int period = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int w : adj[v]) {
            if (level[w] < 0) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                period = std::gcd(period, std::abs(level[v] + 1 - level[w]));
            }
        }
    }
    a.period = period;
    a.aperiodic = period == 1;
    if (!a.aperiodic) return a;

    // Stationary law on the closed class: (I - P^T + 1 1^T) pi = 1.
    const int m = static_cast<int>(cls.size());
    Eigen::MatrixXd system = Eigen::MatrixXd::Ones(m, m);
    for (int i = 0; i < m; ++i) {
        system(i, i) += 1.0;
        for (int j = 0; j < m; ++j) system(i, j) -= p[cls[j] * n + cls[i]];
    }
    const Eigen::VectorXd local = system.partialPivLu().solve(Eigen::VectorXd::Ones(m));
    a.pi.assign(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += (a.pi[cls[i]] = std::max(0.0, local(i)));
    for (auto& v : a.pi) v /= total;

    for (int j = 0; j < n; ++j) {
        double flow = 0.0;
        for (int i = 0; i < n; ++i) flow += a.pi[i] * p[i * n + j];
        a.residual = std::max(a.residual, std::abs(flow - a.pi[j]));
    }
    return a;
}

namespace {

struct InformationTerms {
    std::vector<double> terms;
    std::vector<double> mass;
};

InformationTerms information_terms(const SQGraph& sq, const InputPolicy& policy, const ChainAnalysis& a) {
    const int nq = sq.num_q();
    // joint[q][x][y] = P(Q=q, X=x, Y=y)
    std::vector<std::array<std::array<double, kNumOutputs>, 2>> joint(nq);
    InformationTerms out{std::vector<double>(nq, 0.0), std::vector<double>(nq, 0.0)};
    for (const auto& e : sq.edges)
        joint[e.from % nq][e.x][static_cast<int>(e.y)] += a.pi[e.from] * policy_x_prob(policy, e.from, e.x) * e.prob;
    for (int v = 0; v < sq.num_nodes(); ++v) out.mass[v % nq] += a.pi[v];

    for (int q = 0; q < nq; ++q) {
        const double m = out.mass[q];
        if (m <= 0.0) continue;
        double hy = 0.0, hxy = 0.0, hx = 0.0;
        for (int y = 0; y < kNumOutputs; ++y) hy += plogp((joint[q][0][y] + joint[q][1][y]) / m);
        for (int x = 0; x <= 1; ++x) {
            hx += plogp((joint[q][x][0] + joint[q][x][1] + joint[q][x][2]) / m);
            for (int y = 0; y < kNumOutputs; ++y) hxy += plogp(joint[q][x][y] / m);
        }
        out.terms[q] = std::max(0.0, hx + hy - hxy);
    }
    return out;
}

double weighted_information(const SQGraph& sq, const InputPolicy& policy, const ChainAnalysis& a) {
    const auto t = information_terms(sq, policy, a);
    double total = 0.0;
    for (std::size_t q = 0; q < t.terms.size(); ++q) total += t.mass[q] * t.terms[q];
    return total;
}

const ChainAnalysis& require_pi(const ChainAnalysis& a) {
    if (!a.has_pi()) throw std::domain_error("conditional_mutual_information: policy outside Omega or periodic");
    return a;
}

}  // namespace

std::vector<double> conditional_mutual_information_terms(const SQGraph& sq, const InputPolicy& policy) {
    const auto a = analyze_chain(sq, policy);
    return information_terms(sq, policy, require_pi(a)).terms;
}

double conditional_mutual_information(const SQGraph& sq, const InputPolicy& policy) {
    const auto a = analyze_chain(sq, policy);
    return weighted_information(sq, policy, require_pi(a));
}

namespace {

double score(const SQGraph& sq, const InputPolicy& policy) {
    const auto a = analyze_chain(sq, policy);
    if (!a.has_pi()) return -std::numeric_limits<double>::infinity();
    return weighted_information(sq, policy, a);
}

struct Ascent {
    InputPolicy policy;
    double value;
    int sweeps;
    bool converged;
};

Ascent coordinate_ascent(const SQGraph& sq, InputPolicy policy, const BoundOptions& opt) {
    std::vector<int> free;
    for (int s = 0; s < sq.num_s(); ++s)
        for (int q = 0; q < sq.num_q(); ++q)
            if (sq.automaton.allows(s, 0) && sq.automaton.allows(s, 1)) free.push_back(s * sq.num_q() + q);

    double value = score(sq, policy);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    int sweep = 0;
    bool converged = false;
    for (; sweep < opt.max_sweeps; ++sweep) {
        const double before = value;
        for (int idx : free) {
            auto at = [&](double v) {
                const double keep = policy.p1[idx];
                policy.p1[idx] = v;
                const double r = score(sq, policy);
                policy.p1[idx] = keep;
                return r;
            };
            double best_x = policy.p1[idx], best_v = value;
            auto consider = [&](double x, double v) {
                if (v > best_v) {
                    best_v = v;
                    best_x = x;
                }
            };
            double lo = 0.0, hi = 1.0;
            double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
            double f1 = at(x1), f2 = at(x2);
            while (hi - lo > 1e-10) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + golden * (hi - lo);
                    f2 = at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - golden * (hi - lo);
                    f1 = at(x1);
                }
            }
            consider(x1, f1);
            consider(x2, f2);
            consider(0.0, at(0.0));
            consider(1.0, at(1.0));
            policy.p1[idx] = best_x;
            value = best_v;
        }
        if (value - before <= opt.tol * 1e-3) {
            converged = true;
            ++sweep;
            break;
        }
    }
    return {std::move(policy), value, sweep, converged};
}

}  // namespace

BoundResult optimize_upper_bound(const SQGraph& sq, const BoundOptions& options) {
    if (options.restarts < 1) throw std::invalid_argument("optimize_upper_bound: restarts must be >= 1");
    std::vector<InputPolicy> starts = options.warm_starts;
    for (const auto& w : starts) validate_policy(sq, w);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int r = 0; r < options.restarts; ++r) {
        auto p = InputPolicy::zeros(sq.num_s(), sq.num_q());
        for (int s = 0; s < sq.num_s(); ++s)
            for (int q = 0; q < sq.num_q(); ++q) {
                const bool one = sq.automaton.allows(s, 1), zero = sq.automaton.allows(s, 0);
                p.at(s, q) = one && zero ? u(rng) : one ? 1.0 : 0.0;
            }
        starts.push_back(std::move(p));
    }

    std::vector<std::future<Ascent>> runs;
    for (auto& s : starts)
        runs.push_back(std::async(std::launch::async, coordinate_ascent, std::cref(sq), s, std::cref(options)));

    BoundResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (auto& f : runs) {
        auto r = f.get();
        best.sweeps += r.sweeps;
        if (r.value > best.value) {
            best.value = r.value;
            best.policy = std::move(r.policy);
            best.converged = r.converged;
        }
    }
    return best;
}

InputPolicy scheme_induced_policy(const SplitVector& delta, int d) {
    if (static_cast<int>(delta.size()) != d + 1)
        throw std::invalid_argument("scheme_induced_policy: split vector length must be d+1");
    const int nq = 3 * d + 2;
    auto p = InputPolicy::zeros(d + 1, nq);
    const double total = delta.sum();
    double before = 0.0;
    for (int i = 0; i <= d; ++i) {
        auto ratio = [](double num, double den) { return den > 1e-15 ? std::clamp(num / den, 0.0, 1.0) : 1.0; };
        p.at(d, i) = delta[i] > 0.0 ? ratio(delta[i], 1.0 - before) : 0.0;
        p.at(d, d + 1 + i) = delta[i] > 0.0 ? ratio(delta[i], delta[i] + 1.0 - total) : 0.0;
        before += delta[i];
    }
    return p;
}

BcjrCheck check_bcjr_invariance(const SQGraph& sq, const InputPolicy& policy) {
    const auto a = analyze_chain(sq, policy);
    if (!a.has_pi()) throw std::domain_error("check_bcjr_invariance: stationary distribution undefined");
    const int nq = sq.num_q(), ns = sq.num_s();
    // flow[q][y][s'] = P(Q=q, Y=y, S'=s')
    std::vector<std::array<std::vector<double>, kNumOutputs>> flow(nq);
    for (auto& f : flow)
        for (auto& v : f) v.assign(ns, 0.0);
    for (const auto& e : sq.edges)
        flow[e.from % nq][static_cast<int>(e.y)][e.to / nq] +=
            a.pi[e.from] * policy_x_prob(policy, e.from, e.x) * e.prob;
    std::vector<double> q_mass(nq, 0.0);
    for (int v = 0; v < sq.num_nodes(); ++v) q_mass[v % nq] += a.pi[v];

    BcjrCheck out;
    for (int q = 0; q < nq; ++q)
        for (int y = 0; y < kNumOutputs; ++y) {
            const double total = std::accumulate(flow[q][y].begin(), flow[q][y].end(), 0.0);
            if (total <= 1e-14) continue;
            const int q2 = sq.q_graph.next[q][y];
            if (q_mass[q2] <= 0.0) continue;
            for (int s2 = 0; s2 < ns; ++s2) {
                const double posterior = flow[q][y][s2] / total;
                const double stationary = a.pi[sq.index(s2, q2)] / q_mass[q2];
                out.max_residual = std::max(out.max_residual, std::abs(posterior - stationary));
            }
        }
    out.holds = out.max_residual <= 1e-9;
    return out;
}

}  // namespace rllfb
