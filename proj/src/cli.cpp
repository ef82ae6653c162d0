#include "rllfb/cli.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "rllfb/capacity.hpp"
#include "rllfb/constraint.hpp"
#include "rllfb/feedback_scheme.hpp"
#include "rllfb/qgraph.hpp"
#include "rllfb/rm.hpp"
#include "rllfb/verify.hpp"

namespace rllfb {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double parse_double(std::string_view s) {
    std::size_t used = 0;
    const std::string str(s);
    double v = 0.0;
    try {
        v = std::stod(str, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != str.size()) throw std::invalid_argument("not a number: '" + str + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
}

struct Sink {
    std::ostream& out;
    std::string path;

    void write(const std::string& text) const {
        if (path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
    }
};

std::string rows_hex(const std::vector<BitVec>& words) {
    std::string out;
    for (const auto& w : words) out += w.to_hex() + "\n";
    return out;
}

}  // namespace

EpsGrid EpsGrid::parse(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
        throw std::invalid_argument("eps grid must be start:stop:step");
    EpsGrid g{parse_double(text.substr(0, a)), parse_double(text.substr(a + 1, b - a - 1)),
              parse_double(text.substr(b + 1))};
    if (!(g.step > 0.0)) throw std::invalid_argument("eps grid step must be positive");
    if (g.stop < g.start) throw std::invalid_argument("eps grid stop is below start");
    if (g.start < 0.0 || g.stop > 1.0) throw std::invalid_argument("eps grid must lie in [0,1]");
    return g;
}

std::vector<double> EpsGrid::values() const {
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(std::min(stop, start + static_cast<double>(i) * step));
    return out;
}

std::string capacity_csv_header(int d) {
    std::string h = "eps,capacity,regime";
    for (int i = 0; i <= d; ++i) h += ",delta_" + std::to_string(i);
    return h + "\n";
}

std::string capacity_csv(int d, const EpsGrid& grid, int workers) {
    if (d < 0) throw std::invalid_argument("d must be non-negative");
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto eps = grid.values();
    auto row = [d](double e) {
        const auto c = solve_feedback_capacity(e, d);
        std::string line = num(e) + "," + num(c.value) + "," + std::string(to_string(c.regime));
        for (double x : c.argmax.values()) line += "," + num(x);
        return line + "\n";
    };
    std::string out = capacity_csv_header(d);
    for (std::size_t i = 0; i < eps.size(); i += workers) {
        std::vector<std::future<std::string>> batch;
        for (std::size_t j = i; j < std::min(eps.size(), i + workers); ++j)
            batch.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, row, eps[j]));
        for (auto& f : batch) out += f.get();
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feedback capacity, coding scheme and Reed-Muller tools for runlength-limited erasure channels"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write the main output to this file instead of stdout");
    std::uint64_t seed = 1;
    auto add_seed = [&seed](CLI::App* sub) {
        sub->add_option("--seed", seed, "Random seed")->envname("RLLFBC_SEED")->capture_default_str();
    };

    int d = 1;
    std::string eps_text = "0:1:0.01";
    int workers = 0;
    auto* capacity = app.add_subcommand("capacity", "Feedback capacity over an erasure-probability grid (CSV)");
    capacity->add_option("--d", d, "Minimum zeros between ones")->required()->check(CLI::Range(0, 64));
    capacity->add_option("--eps", eps_text, "Grid start:stop:step")->capture_default_str();
    capacity->add_option("--workers", workers, "Concurrent grid points (0 = hardware threads)");

    double eps = 0.5;
    std::size_t num_bits = 4096;
    std::string message, delta_text, policy_name = "truncate";
    std::uint64_t max_uses = 0, total_uses = 0;
    auto* sim = app.add_subcommand("simulate", "Run the zero-error feedback scheme over a simulated erasure channel (JSON)");
    sim->add_option("--d", d)->required()->check(CLI::Range(0, 64));
    sim->add_option("--eps", eps, "Erasure probability")->required()->check(CLI::Range(0.0, 1.0));
    sim->add_option("--bits", num_bits, "Random message length")->capture_default_str();
    sim->add_option("--message", message, "Message as a 0/1 string (overrides --bits)");
    sim->add_option("--delta", delta_text, "Comma-separated split vector (default: the capacity-achieving one)");
    sim->add_option("--max-uses", max_uses, "Channel-use budget for one session (0 = none)");
    sim->add_option("--uses", total_uses, "Run back-to-back sessions until this many channel uses and report the rate");
    sim->add_option("--policy", policy_name, "Cooldown shortfall policy")
        ->check(CLI::IsMember({"truncate", "idle"}))
        ->capture_default_str();
    add_seed(sim);

    int restarts = 8;
    auto* qbound = app.add_subcommand("qbound", "Q-graph upper bound on the feedback capacity (JSON)");
    qbound->add_option("--d", d)->required()->check(CLI::Range(0, 16));
    qbound->add_option("--eps", eps)->required()->check(CLI::Range(0.0, 1.0));
    qbound->add_option("--restarts", restarts)->capture_default_str()->check(CLI::Range(0, 1000));
    add_seed(qbound);

    int k = -1;
    auto* noiseless = app.add_subcommand("noiseless", "Noiseless capacity of a (d,k) constraint");
    noiseless->add_option("--d", d)->required()->check(CLI::Range(0, 64));
    noiseless->add_option("--k", k, "Maximum zeros between ones (omit for infinity)")->check(CLI::Range(0, 64));

    auto* rm = app.add_subcommand("rm", "Reed-Muller constrained subcode tools");
    rm->require_subcommand(1);
    int m = 4, r = 2;
    double rate = 0.5;
    bool list = false;
    auto add_mr = [&](CLI::App* sub) {
        sub->add_option("--m", m)->required()->check(CLI::Range(0, kMaxEvalVariables));
        sub->add_option("--r", r)->required()->check(CLI::Range(0, kMaxEvalVariables));
    };
    auto* rstar_cmd = rm->add_subcommand("rstar", "Rate below which the upper-bound curve beats the trivial bound");
    auto* bound_cmd = rm->add_subcommand("bound", "Upper-bound curve on the (1,inf) subcode rate");
    bound_cmd->add_option("--rate", rate)->required()->check(CLI::Range(0.0, 1.0));
    auto* subcode_cmd = rm->add_subcommand("subcode", "Constrained subcode construction (d,inf) or (0,k)");
    add_mr(subcode_cmd);
    auto* sub_d = subcode_cmd->add_option("--d", d, "Build the (d,inf) subcode")->check(CLI::Range(1, 64));
    auto* sub_k = subcode_cmd->add_option("--k", k, "Build the (0,k) subcode")->check(CLI::Range(1, 64));
    sub_d->excludes(sub_k);
    subcode_cmd->add_flag("--list", list, "Dump every codeword as hex words");
    auto* weights_cmd = rm->add_subcommand("weights", "Weight distribution (CSV)");
    add_mr(weights_cmd);
    auto* gen_cmd = rm->add_subcommand("generator", "Generator matrix (CSV)");
    add_mr(gen_cmd);
    auto* nec_cmd = rm->add_subcommand("necessary", "Exhaustive (1,inf) necessary-condition check (JSON)");
    add_mr(nec_cmd);
    auto* largest_cmd = rm->add_subcommand("largest", "Size of the largest (d,inf) subcode by enumeration");
    add_mr(largest_cmd);
    largest_cmd->add_option("--d", d)->required()->check(CLI::Range(1, 64));

    std::vector<int> only;
    std::string golden;
    auto* verify = app.add_subcommand("verify", "Run the full verification suite");
    verify->add_option("--only", only, "Criterion ids to run")->delimiter(',');
    verify->add_option("--golden", golden, "Directory with golden capacity CSVs");
    add_seed(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const Sink sink{out, out_path};
    try {
        if (*capacity) {
            sink.write(capacity_csv(d, EpsGrid::parse(eps_text), workers));
        } else if (*sim) {
            const auto policy = policy_name == "idle" ? ShortfallPolicy::Idle : ShortfallPolicy::Truncate;
            const SplitVector delta =
                delta_text.empty() ? solve_feedback_capacity(eps, d).argmax : SplitVector(parse_list(delta_text));
            if (delta.d() != d) throw std::invalid_argument("--delta needs d+1 entries");
            if (total_uses > 0) {
                const auto mr = measure_rate(delta, eps, d, total_uses, seed, num_bits, policy);
                nlohmann::ordered_json j;
                j["sessions"] = mr.sessions;
                j["channel_uses"] = mr.channel_uses;
                j["resolved_bits"] = mr.resolved_bits;
                j["empirical_rate"] = mr.empirical_rate;
                j["analytic_rate"] = analytic_rate(delta, eps, d);
                j["errors"] = mr.errors;
                j["constraint_ok"] = mr.constraint_ok;
                j["seed"] = seed;
                sink.write(j.dump(2) + "\n");
            } else {
                std::vector<std::uint8_t> bits;
                if (!message.empty()) {
                    for (char c : message) {
                        if (c != '0' && c != '1') throw std::invalid_argument("--message must be a 0/1 string");
                        bits.push_back(static_cast<std::uint8_t>(c - '0'));
                    }
                } else {
                    std::mt19937_64 rng(seed);
                    bits.resize(num_bits);
                    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
                }
                SimulationOptions opts;
                opts.max_channel_uses = max_uses;
                opts.shortfall = policy;
                if (eps >= 1.0 && max_uses == 0) throw std::invalid_argument("eps = 1 needs --max-uses");
                sink.write(simulate(bits, eps, delta, d, seed, opts).to_json() + "\n");
            }
        } else if (*qbound) {
            const auto cap = solve_feedback_capacity(eps, d);
            const auto sq = build_sq_graph(ConstraintAutomaton(ConstraintSpec::dinf(d)), build_q_graph_family(d), eps);
            BoundOptions opts;
            opts.restarts = restarts;
            opts.seed = seed;
            opts.warm_starts.push_back(scheme_induced_policy(cap.argmax, d));
            const auto b = optimize_upper_bound(sq, opts);
            nlohmann::ordered_json j;
            j["bound"] = b.value;
            j["gap_to_capacity"] = b.value - cap.value;
            sink.write(j.dump(2) + "\n");
        } else if (*noiseless) {
            const auto spec = k < 0 ? ConstraintSpec::dinf(d) : ConstraintSpec::dk(d, k);
            sink.write(num(noiseless_capacity(spec)) + "\n");
        } else if (*rstar_cmd) {
            sink.write(num(rstar()) + "\n");
        } else if (*bound_cmd) {
            sink.write(num(rm_upper_bound_capped(rate)) + "\n");
        } else if (*subcode_cmd) {
            if (sub_k->count() > 0) {
                const auto c = build_0k_subcode(m, r, k);
                if (list) {
                    sink.write(rows_hex(list_0k_subcode(c)));
                } else {
                    sink.write("m,r,k,t,families,exact_size,stated_lower_bound,corrected_lower_bound\n" +
                               std::to_string(m) + "," + std::to_string(r) + "," + std::to_string(k) + "," +
                               std::to_string(c.t) + "," + std::to_string(c.families.size()) + "," +
                               c.exact_size.get_str() + "," + c.stated_lower_bound.get_str() + "," +
                               c.corrected_lower_bound.get_str() + "\n");
                }
            } else {
                const auto c = build_dinf_subcode(m, r, d);
                if (list) {
                    if (c.rows.size() > kMaxExhaustiveDimension) throw std::invalid_argument("subcode too large to list");
                    std::vector<BitVec> words;
                    BitVec v(std::size_t{1} << m);
                    words.push_back(v);
                    for (std::uint64_t i = 1; i < (std::uint64_t{1} << c.rows.size()); ++i) {
                        v ^= c.rows[std::countr_zero(i)];
                        words.push_back(v);
                    }
                    sink.write(rows_hex(words));
                } else {
                    const mpq_class q = dinf_subcode_rate(m, r, d);
                    sink.write("m,r,d,z,dimension,rate\n" + std::to_string(m) + "," + std::to_string(r) + "," +
                               std::to_string(d) + "," + std::to_string(c.z) + "," +
                               dinf_subcode_dimension(m, r, d).get_str() + "," + num(q.get_d()) + "\n");
                }
            }
        } else if (*weights_cmd) {
            sink.write(weight_table_csv(weight_distribution(m, r)));
        } else if (*gen_cmd) {
            if (r > m) throw std::invalid_argument("r must not exceed m");
            sink.write(rm_generator(m, r).to_csv());
        } else if (*nec_cmd) {
            const auto rep = verify_necessary_condition(m, r);
            nlohmann::ordered_json j;
            j["codewords"] = rep.codewords;
            j["constrained"] = rep.constrained;
            j["violations"] = rep.violations;
            sink.write(j.dump(2) + "\n");
            return rep.violations == 0 ? 0 : 1;
        } else if (*largest_cmd) {
            sink.write(enumerate_largest_constrained_subcode(m, r, ConstraintSpec::dinf(d)).get_str() + "\n");
        } else if (*verify) {
            VerifyOptions opts;
            opts.seed = seed;
            opts.golden_dir = golden;
            opts.only = only;
            std::string report;
            bool ok = true;
            run_verification(opts, [&](const CriterionResult& res) {
                const auto line = format_result(res) + "\n";
                if (out_path.empty()) out << line << std::flush;
                report += line;
                ok = ok && res.pass;
            });
            if (!out_path.empty()) sink.write(report);
            return ok ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace rllfb
