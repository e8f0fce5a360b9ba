// factlab: command-line front end for the factorization lab. All numeric
// parameters cross the boundary as decimal strings (rationals as "a/b");
// outputs are machine-readable JSON, JSONL, or CSV.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "factlab/arith.hpp"
#include "factlab/census.hpp"
#include "factlab/fermat.hpp"
#include "factlab/lattice.hpp"
#include "factlab/mpoly.hpp"
#include "factlab/smallroots.hpp"
#include "factlab/trivariate.hpp"

using namespace factlab;
using nlohmann::ordered_json;

namespace {

Int seed_override(const Int& cli_seed) {
    if (const char* env = std::getenv("FACTLAB_SEED")) return parse_int(env);
    return cli_seed;
}

int run_factor(const std::string& method, const std::string& n_str, const std::string& gamma,
               const std::string& alpha, const std::string& beta, const std::string& plow,
               unsigned t_bits, std::uint64_t max_steps) {
    Int n = parse_int(n_str);
    ordered_json j;
    j["n"] = n.get_str();
    j["method"] = method;

    // Factors never leave the binary without an exact product re-check.
    auto emit_fermat = [&](const fermat::FactorResult& r) {
        if (r.found && r.p * r.q != n) throw std::logic_error("unverified factorization");
        j["status"] = r.found ? (r.trivial ? "trivial" : "found") : "exhausted";
        j["steps"] = r.steps;
        if (r.found) {
            j["p"] = r.p.get_str();
            j["q"] = r.q.get_str();
            j["x"] = r.x.get_str();
            j["y"] = r.y.get_str();
        } else {
            j["p"] = nullptr;
            j["q"] = nullptr;
        }
        std::cout << j.dump() << "\n";
        return (r.found && !r.trivial) ? 0 : 1;
    };
    auto emit_lattice = [&](const smallroots::FactorOutcome& out) {
        if (out.found && out.p * out.q != n) throw std::logic_error("unverified factorization");
        j["status"] = out.found             ? "found"
                      : out.gate_refused    ? "bound_refused"
                      : out.usable_vector   ? "no_root_in_box"
                                            : "no_usable_vector";
        if (out.found) {
            j["p"] = out.p.get_str();
            j["q"] = out.q.get_str();
        } else {
            j["p"] = nullptr;
            j["q"] = nullptr;
        }
        std::cout << j.dump() << "\n";
        return out.found ? 0 : 1;
    };

    if (method == "fermat") return emit_fermat(fermat::fermat_factor(n, max_steps));
    if (method == "triangular") return emit_fermat(fermat::triangular_fermat(n, max_steps));
    if (method == "shifted")
        return emit_fermat(fermat::shifted_fermat(n, parse_rat(gamma), max_steps));
    if (method == "shifted-center") {
        // Desk-scale working box; deeper shift sets rescue thin margins.
        Int box = arith::iroot(n, 4) / 2 + 1;
        smallroots::FactorOutcome out;
        for (unsigned k = 2; k <= 3; ++k) {
            smallroots::SolveOptions opt;
            opt.k_shift = k;
            out = smallroots::factor_shifted_center(n, parse_rat(alpha), parse_rat(beta), box,
                                                    box, opt);
            if (out.found || out.gate_refused) break;
        }
        return emit_lattice(out);
    }
    if (method == "lowbits")
        return emit_lattice(smallroots::factor_known_low_bits(n, parse_int(plow), t_bits));
    throw CLI::ValidationError("--method", "unknown method " + method);
}

int run_gen(unsigned bits, const std::string& ratio, const std::string& seed) {
    auto s = arith::gen_balanced_semiprime(bits, parse_rat(ratio), seed_override(parse_int(seed)));
    ordered_json j;
    j["bits"] = bits;
    j["ratio"] = parse_rat(ratio).get_str();
    j["seed"] = seed_override(parse_int(seed)).get_str();
    j["n"] = s.n.get_str();
    j["p"] = s.p.get_str();
    j["q"] = s.q.get_str();
    std::cout << j.dump() << "\n";
    return 0;
}

int run_census(const std::string& x_str, const std::string& ratio, const std::string& format) {
    Int x = parse_int(x_str);
    if (!x.fits_ulong_p()) throw std::domain_error("census: x out of range");
    auto row = census::count_balanced(x.get_ui(), parse_rat(ratio));
    if (format == "csv") {
        std::cout << census::csv_header() << "\n" << census::csv_row(row) << "\n";
    } else {
        ordered_json j;
        j["x"] = row.x;
        j["c"] = row.c.get_str();
        j["count"] = row.exact_count;
        j["model"] = row.model;
        j["ratio"] = row.ratio;
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int run_lll(const std::string& in_path, const std::string& delta, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open " + in_path);
    auto basis = lattice::read_basis(in);
    auto [reduced, report] = lattice::lll_reduce(basis, parse_rat(delta));

    ordered_json j;
    j["n"] = reduced.dim();
    j["m"] = reduced.cols();
    j["delta"] = report.lovasz_delta.get_str();
    j["det_squared"] = report.det_squared.get_str();
    j["swaps"] = report.swaps;
    ordered_json norms = ordered_json::array();
    for (const auto& v : report.vector_norms_squared) norms.push_back(v.get_str());
    j["norms_squared"] = norms;
    ordered_json bounds = ordered_json::array();
    for (bool b : report.reduced_norm_bounds_ok) bounds.push_back(b);
    j["reduced_norm_bounds_ok"] = bounds;
    j["minkowski_ok"] = lattice::minkowski_check(reduced);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        lattice::write_basis(out, reduced);
        j["out"] = out_path;
    } else {
        ordered_json rows = ordered_json::array();
        for (const auto& row : reduced.rows) {
            ordered_json r = ordered_json::array();
            for (const auto& v : row) r.push_back(v.get_str());
            rows.push_back(r);
        }
        j["rows"] = rows;
    }
    std::cout << j.dump() << "\n";
    return 0;
}

int run_experiment(unsigned bits, unsigned trials, const std::string& tau, const std::string& beta,
                   const std::string& eps, const std::string& preset, const std::string& seed,
                   unsigned jobs, const std::string& out_path, const std::string& dump_dir) {
    trivariate::AlgoConfig base;
    base.tau = parse_rat(tau);
    base.beta = parse_rat(beta);
    base.eps = parse_rat(eps);
    if (preset == "exact") base.preset = trivariate::AlgoConfig::Preset::exact;
    else if (preset == "scaled") base.preset = trivariate::AlgoConfig::Preset::scaled;
    else throw CLI::ValidationError("--preset", "unknown preset " + preset);

    Int seed0 = seed_override(parse_int(seed));
    std::vector<std::string> lines(trials);
    std::vector<std::thread> workers;
    std::size_t stride = jobs == 0 ? 1 : jobs;
    for (unsigned w = 0; w < stride; ++w) {
        workers.emplace_back([&, w]() {
            for (unsigned i = w; i < trials; i += stride) {
                auto s = arith::gen_balanced_semiprime(bits, Rat(2), seed0 + i);
                auto rec = trivariate::run_pipeline(s.n, base);
                lines[i] = rec.to_jsonl();
            }
        });
    }
    for (auto& th : workers) th.join();

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    for (const auto& line : lines) out << line << "\n";

    if (!dump_dir.empty()) {
        // one sample instance's polynomials, in the poly text format
        auto s = arith::gen_balanced_semiprime(bits, Rat(2), seed0);
        Int p0, q0, m0, r0;
        trivariate::preset_parameters(s.n, base.preset, p0, q0, m0, r0);
        std::ofstream f0(dump_dir + "/f0.poly");
        poly::write_poly(f0, trivariate::build_f0(s.n, p0, q0, m0, r0));
        std::ofstream f4(dump_dir + "/f4.poly");
        poly::write_poly(f4, trivariate::build_f4(p0, q0));
    }
    std::cerr << "wrote " << trials << " records to " << out_path << "\n";
    return 0;
}

int run_bench(unsigned bits, unsigned trials, const std::string& seed,
              const std::string& out_path) {
    Int seed0 = seed_override(parse_int(seed));
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open " + out_path);
        out = &file;
    }

    arith::Rng rng(seed0);
    for (unsigned i = 0; i < trials; ++i) {
        auto s = arith::gen_balanced_semiprime(bits, Rat(2), seed0 + i);
        ordered_json j;
        j["n"] = s.n.get_str();
        j["bits"] = bits;

        auto t0 = std::chrono::steady_clock::now();
        auto classic = fermat::fermat_factor(s.n, 100000000ULL);
        auto t1 = std::chrono::steady_clock::now();
        j["fermat_steps"] = classic.steps;
        j["fermat_found"] = classic.found;
        j["fermat_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

        auto tri = fermat::triangular_fermat(s.n, 4 * arith::iroot(s.n, 4).get_ui() + 16);
        j["triangular_steps"] = tri.steps;
        j["triangular_found"] = tri.found;

        // Shifted-center recovery threshold: constructed instances with the
        // factors planted near the alpha=1/2, beta=2 centers; the sweep finds
        // the largest offset scale N^(1/4)/2^shrink that still recovers.
        int recovered_at_shrink = -1;
        Int T = Int(1) << bits;
        Int A0 = arith::round_sqrt_rational(T, Int(2));
        Int B0 = arith::round_sqrt_rational(2 * T, Int(1));
        for (int shrink = 0; shrink <= 6; ++shrink) {
            Int F = arith::iroot(T, 4) >> (shrink + 1);
            if (F < 8) break;
            Int p = arith::next_prime(A0 - F + rng.below(2 * F));
            Int q = arith::next_prime(B0 - F + rng.below(2 * F));
            Int N = p * q;
            Int X = arith::iroot(N, 4) >> shrink;
            auto sc = smallroots::factor_shifted_center(N, Rat(1, 2), Rat(2), X, X);
            if (sc.found && sc.p * sc.q == N) {
                recovered_at_shrink = shrink;
                break;
            }
        }
        j["shifted_center_offset_shrink"] = recovered_at_shrink;
        (*out) << j.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"factlab: integer factorization laboratory"};
    app.require_subcommand(1);

    // factor
    auto* factor = app.add_subcommand("factor", "factor one integer");
    std::string method, n_str, gamma = "1", alpha = "1/2", beta = "2", plow = "0";
    unsigned t_bits = 0;
    std::uint64_t max_steps = 100000000ULL;
    factor->add_option("--method", method,
                       "fermat|triangular|shifted|lowbits|shifted-center")->required();
    factor->add_option("--n", n_str, "odd composite, decimal")->required();
    factor->add_option("--gamma", gamma, "scan-start factor a/b (shifted)");
    factor->add_option("--alpha", alpha, "center parameter a/b (shifted-center)");
    factor->add_option("--beta", beta, "center parameter a/b (shifted-center)");
    factor->add_option("--plow", plow, "known low bits of p, decimal (lowbits)");
    factor->add_option("--t", t_bits, "number of known low bits (lowbits)");
    factor->add_option("--max-steps", max_steps, "candidate budget");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a balanced semiprime");
    unsigned gen_bits = 48;
    std::string gen_ratio = "2", gen_seed = "1";
    gen->add_option("--bits", gen_bits, "target bit length")->required();
    gen->add_option("--ratio", gen_ratio, "balance bound a/b")->required();
    gen->add_option("--seed", gen_seed, "decimal seed")->required();

    // census
    auto* census_cmd = app.add_subcommand("census", "count balanced semiprimes up to x");
    std::string census_x, census_ratio = "2", census_format = "json";
    census_cmd->add_option("--x", census_x, "threshold, decimal")->required();
    census_cmd->add_option("--ratio", census_ratio, "balance bound a/b")->required();
    census_cmd->add_option("--format", census_format, "json|csv");

    // lll
    auto* lll = app.add_subcommand("lll", "reduce a lattice basis file");
    std::string lll_in, lll_delta = "3/4", lll_out;
    lll->add_option("--in", lll_in, "basis file (\"n m\" header, rows)")->required();
    lll->add_option("--delta", lll_delta, "Lovasz parameter a/b in (1/4, 1)");
    lll->add_option("--out", lll_out, "write the reduced basis here");

    // experiment trivariate
    auto* experiment = app.add_subcommand("experiment", "batched experiments");
    auto* trivar = experiment->add_subcommand("trivariate", "multiplier-pipeline trials");
    unsigned exp_bits = 48, exp_trials = 10, exp_jobs = 1;
    std::string exp_tau = "0", exp_beta = "1", exp_eps = "1/100";
    std::string exp_preset = "scaled", exp_seed = "1", exp_out, exp_dump;
    trivar->add_option("--bits", exp_bits, "semiprime size")->required();
    trivar->add_option("--trials", exp_trials, "number of instances")->required();
    trivar->add_option("--tau", exp_tau, "lattice parameter a/b");
    trivar->add_option("--beta", exp_beta, "multiplier exponent a/b");
    trivar->add_option("--eps", exp_eps, "slack parameter a/b");
    trivar->add_option("--preset", exp_preset, "exact|scaled");
    trivar->add_option("--seed", exp_seed, "decimal seed");
    trivar->add_option("--jobs", exp_jobs, "parallel workers");
    trivar->add_option("--out", exp_out, "JSONL output path")->required();
    trivar->add_option("--dump-polys", exp_dump, "directory for sample polynomials");

    // bench
    auto* bench = app.add_subcommand("bench", "step-count and threshold measurements");
    unsigned bench_bits = 40, bench_trials = 5;
    std::string bench_seed = "1", bench_out;
    bench->add_option("--bits", bench_bits, "semiprime size");
    bench->add_option("--trials", bench_trials, "number of instances");
    bench->add_option("--seed", bench_seed, "decimal seed");
    bench->add_option("--out", bench_out, "JSONL output path");

    try {
        app.parse(argc, argv);
        if (factor->parsed())
            return run_factor(method, n_str, gamma, alpha, beta, plow, t_bits, max_steps);
        if (gen->parsed()) return run_gen(gen_bits, gen_ratio, gen_seed);
        if (census_cmd->parsed()) return run_census(census_x, census_ratio, census_format);
        if (lll->parsed()) return run_lll(lll_in, lll_delta, lll_out);
        if (experiment->parsed()) {
            if (!trivar->parsed()) throw CLI::ValidationError("experiment", "expected a kind");
            return run_experiment(exp_bits, exp_trials, exp_tau, exp_beta, exp_eps, exp_preset,
                                  exp_seed, exp_jobs, exp_out, exp_dump);
        }
        if (bench->parsed()) return run_bench(bench_bits, bench_trials, bench_seed, bench_out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
