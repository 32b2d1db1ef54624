// hkl: command-line front end.
//
// Exit status: 0 on success or a passing check, 1 when a check fails or an
// I/O operation fails, 2 on a usage error or violated precondition.

#include "hkl/acceptance.hpp"
#include "hkl/hkl.hpp"

#include "CLI11.hpp"

#include <iostream>

#ifndef HKL_GOLDEN_DIR
#define HKL_GOLDEN_DIR "tests/golden/v1"
#endif

namespace {

using hkl::io::json;

struct Common {
    std::string cache_dir;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    bool verbose = false;
};

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::shared_ptr<const hkl::FieldCtx> load_field(const Common& c, std::uint64_t p, unsigned k) {
    if (!hkl::is_prime(p)) throw hkl::DomainError("--p must be prime (got " + std::to_string(p) + ")");
    if (p == 2) throw hkl::DomainError("--p must be odd");
    if (k < 1) throw hkl::DomainError("--k must be >= 1");
    std::optional<std::filesystem::path> dir;
    if (!c.cache_dir.empty())
        dir = c.cache_dir;
    else
        dir = hkl::io::cache_dir_from_env();
    if (!dir) return std::make_shared<const hkl::FieldCtx>(hkl::FieldCtx::make(p, k));
    auto r = hkl::io::cached_field(p, k, *dir);
    if (c.verbose) {
        std::cerr << "dlog cache " << hkl::io::to_string(r.status) << ": " << r.file.string();
        if (!r.note.empty()) std::cerr << " (" << r.note << ")";
        std::cerr << "\n";
    }
    return r.ctx;
}

void require_rank(unsigned n) {
    if (n < 2) throw hkl::DomainError("--n must be >= 2");
}

void emit(const std::string& out, const std::string& data) {
    if (out.empty() || out == "-") {
        std::cout << data;
        return;
    }
    hkl::io::write_file(out, data);
}

std::uint64_t default_conductor(std::uint64_t p, unsigned k, unsigned n) {
    const std::uint64_t q = hkl::big_pow(p, k).convert_to<std::uint64_t>();
    return (n % 2 == 0 && q % 4 == 3) ? 4 * p : p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyper-Kloosterman sums: exact and floating tables, reductions, monodromy checks"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--cache-dir", common.cache_dir, "Directory for cached discrete-log tables (default: $HKL_CACHE_DIR)");
    app.add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", common.seed, "Seed for randomized steps");
    app.add_flag("-v,--verbose", common.verbose, "Diagnostics on stderr");

    std::uint64_t p = 0, ell = 0, u = 1, cap = 10'000'000, samples = 10'000, small_q = 0, big_q = 0, a_code = 0, i0 = 0;
    unsigned k = 1, n = 0, moments = 3, f = 1;
    std::string mode = "exact", out, family = "SL", golden_dir = HKL_GOLDEN_DIR;
    std::vector<std::uint64_t> primes;
    bool flip = false, sweep = false, pairing = false;

    auto add_field = [&](CLI::App* s) {
        s->add_option("--p", p, "Characteristic of F_q")->required();
        s->add_option("--k", k, "Degree of F_q over F_p")->check(CLI::PositiveNumber);
    };

    auto* compute = app.add_subcommand("compute", "Table of S_n(a) (exact JSON) or Kl_n(a) (float CSV) for all a");
    add_field(compute);
    compute->add_option("--n", n, "Rank")->required();
    compute->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    compute->add_option("--u", u, "Embedding zeta_p -> e(u/p) for float mode");
    compute->add_option("--out", out, "Output file (default stdout)");

    auto* reduce = app.add_subcommand("reduce", "Normalized Kl_n(a) reduced modulo a prime above l");
    add_field(reduce);
    reduce->add_option("--n", n, "Rank")->required();
    reduce->add_option("--ell", ell, "Prime l")->required();
    reduce->add_flag("--flip-sign", flip, "Use -s as the square root of q");
    reduce->add_option("--out", out, "Output file (default stdout)");

    auto* twist = app.add_subcommand("twist-check", "Check zeta_p -> zeta_p^u maps S_n(a) to S_n(a u^n) for all u");
    add_field(twist);
    twist->add_option("--n", n, "Rank")->required();

    auto* weil = app.add_subcommand("weil-check", "Check |Kl_n(a)| <= n under every embedding");
    add_field(weil);
    weil->add_option("--n", n, "Rank")->required();

    auto* tfield = app.add_subcommand("trace-field", "Degree of the field generated by reduced Kloosterman values");
    add_field(tfield);
    tfield->add_option("--n", n, "Rank")->required();
    tfield->add_option("--ell", ell, "Prime l")->required();

    auto* st = app.add_subcommand("sato-tate", "Moments and KS distance of Kl_2 over F_p");
    st->add_option("--primes", primes, "Primes p <= 10^6")->required();
    st->add_option("--moments", moments, "K: report moments 1..2K")->check(CLI::Range(1u, 20u));
    st->add_option("--out", out, "CSV output file (default stdout)");

    auto* gauss = app.add_subcommand("gauss", "Quadratic Gauss sum G_q and the check G_q^2 = chi(-1) q");
    add_field(gauss);

    auto* gen = app.add_subcommand("gen-check", "Order of <u, m> in SL_n(F_l)");
    gen->add_option("--n", n, "Dimension")->required();
    gen->add_option("--ell", ell, "Prime l")->required();
    gen->add_option("--cap", cap, "BFS element cap");

    auto* inertia = app.add_subcommand("inertia", "Inertia-at-infinity matrices and their checks");
    add_field(inertia);
    inertia->add_option("--n", n, "Rank")->required();
    inertia->add_option("--a", a_code, "a0 as a field element code");
    inertia->add_option("--i", i0, "i0 in [0, 2n)");
    inertia->add_flag("--sweep", sweep, "Exhaustive homomorphism and determinant check");
    inertia->add_flag("--pairing", pairing, "Invariant bilinear forms of the wild part");

    auto* norm = app.add_subcommand("normalizer-check", "g^n in G(k) for g in G(L) normalizing G(k)");
    norm->add_option("--family", family, "SL or Sp")->check(CLI::IsMember({"SL", "Sp"}));
    norm->add_option("--n", n, "Dimension and power")->required();
    norm->add_option("--small", small_q, "|k|")->required();
    norm->add_option("--large", big_q, "|L|")->required();
    norm->add_option("--mode", mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
    norm->add_option("--samples", samples, "Candidates in sampled mode");

    auto* cls = app.add_subcommand("classify", "Candidate simple groups and geometric-class exclusions");
    cls->add_option("--n", n, "Dimension")->required();
    cls->add_option("--ell", ell, "Prime l")->required();
    cls->add_option("--f", f, "Residue degree [F_lambda : F_l]")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite");
    verify->add_option("--golden-dir", golden_dir, "Directory with golden files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*compute) {
            require_rank(n);
            auto ctx = load_field(common, p, k);
            if (mode == "exact") {
                const auto t = hkl::kl_raw_all(ctx, n, common.threads);
                emit(out, hkl::io::table_to_json(t).dump(1) + "\n");
            } else {
                if (u % p == 0) throw hkl::DomainError("--u must be coprime to p");
                emit(out, hkl::io::float_table_csv(hkl::kl_all_float(*ctx, n, u)));
            }
        } else if (*reduce) {
            require_rank(n);
            if (!hkl::is_prime(ell) || ell == p) throw hkl::DomainError("--ell must be a prime different from p");
            auto ctx = load_field(common, p, k);
            const auto t = hkl::kl_raw_all(ctx, n, common.threads);
            const std::uint64_t m = default_conductor(p, k, n);
            const auto rc = hkl::ReductionCtx::make(hkl::CycloRing(m), ell, common.seed);
            const auto vals = hkl::kl_reduce_all(t, rc, flip);
            const auto& F = rc.residue_field();
            json values = json::array();
            for (std::size_t j = 0; j < vals.size(); ++j) values.push_back({{"a_dlog", j}, {"value", F.to_poly(vals[j])}});
            json doc{{"p", p},
                     {"k", k},
                     {"n", n},
                     {"ell", ell},
                     {"conductor", m},
                     {"f", rc.f()},
                     {"factor", rc.factor()},
                     {"sqrt_q_sign", flip ? "negated" : "canonical"},
                     {"values", std::move(values)}};
            emit(out, doc.dump(1) + "\n");
        } else if (*twist) {
            require_rank(n);
            const auto t = hkl::kl_raw_all(load_field(common, p, k), n, common.threads);
            bool all = true;
            for (std::uint64_t v = 1; v < p; ++v) {
                const bool ok = hkl::galois_twist_check(t, v);
                all = all && ok;
                std::cout << "u=" << v << " " << (ok ? "ok" : "FAIL") << "\n";
            }
            if (!all) throw CheckFailed("Galois twist identity fails");
        } else if (*weil) {
            require_rank(n);
            const auto w = hkl::weil_bound_check(load_field(common, p, k), n, common.threads);
            std::cout << json{{"pass", w.pass}, {"max_ratio", w.max_ratio}, {"worst_a_dlog", w.worst_dlog}, {"worst_u", w.worst_embedding}}.dump()
                      << "\n";
            if (!w.pass) throw CheckFailed("Weil bound violated");
        } else if (*tfield) {
            require_rank(n);
            if (!hkl::is_prime(ell) || ell == p) throw hkl::DomainError("--ell must be a prime different from p");
            const auto t = hkl::kl_raw_all(load_field(common, p, k), n, common.threads);
            const auto rc = hkl::ReductionCtx::make(hkl::CycloRing(default_conductor(p, k, n)), ell, common.seed);
            const auto d = hkl::trace_field_degree(hkl::kl_reduce_all(t, rc), rc);
            std::cout << json{{"degree", d}, {"f", rc.f()}, {"f_over_gcd_f_n", rc.f() / std::gcd<std::uint64_t>(rc.f(), n)}}.dump() << "\n";
        } else if (*st) {
            for (auto q : primes)
                if (!hkl::is_prime(q) || q == 2) throw hkl::DomainError("--primes must be odd primes");
            const auto reps = hkl::sato_tate_stats(primes, moments, common.threads);
            std::ostringstream os;
            os.precision(17);
            os << "p";
            for (unsigned j = 1; j <= 2 * moments; ++j) os << ",m" << j;
            os << ",ks\n";
            for (const auto& r : reps) {
                os << r.p;
                for (double m : r.moments) os << ',' << m;
                os << ',' << r.ks << '\n';
            }
            emit(out, os.str());
        } else if (*gauss) {
            auto ctx = load_field(common, p, k);
            const hkl::CycloRing ring(p);
            const auto g = hkl::gauss_sum(ring, *ctx);
            const auto want = ring.from_int(hkl::chi2_minus_one(ctx->q()) * static_cast<std::int64_t>(ctx->q()));
            const bool ok = ring.mul(g, g) == want;
            json coeffs = json::array();
            for (const auto& c : g.coeffs) coeffs.push_back(c.str());
            std::cout << json{{"coeffs", coeffs}, {"square_is_chi_q", ok}}.dump() << "\n";
            if (!ok) throw CheckFailed("G^2 != chi(-1) q");
        } else if (*gen) {
            if (!hkl::is_prime(ell)) throw hkl::DomainError("--ell must be prime");
            const auto F = hkl::FieldCtx::make(ell, 1, std::nullopt, /*allow_even=*/true);
            const std::vector<hkl::MatFin> gens{hkl::elem_u(F, n), hkl::elem_m(F, n)};
            const auto want = hkl::group_order(hkl::ClassicalFamily::SL, n, ell);
            hkl::ClosureOptions opt;
            opt.cap = cap;
            const auto bfs = hkl::group_closure(F, gens, opt);
            std::optional<hkl::BigInt> ss;
            try {
                ss = hkl::matrix_group_order(F, gens);
            } catch (const hkl::DomainError&) {
            }
            const hkl::BigInt order = bfs.complete ? hkl::BigInt(bfs.order) : (ss ? *ss : hkl::BigInt(0));
            std::cout << "order " << (order == 0 ? std::string("unknown") : order.str()) << "\n";
            std::cout << "bfs " << (bfs.complete ? "complete" : bfs.stop_reason) << ", " << bfs.order << " elements, ~"
                      << (bfs.bytes >> 20) << " MiB\n";
            if (ss) std::cout << "schreier-sims " << ss->str() << "\n";
            std::cout << "|SL_" << n << "(F_" << ell << ")| " << want.str() << "\n";
            if (order != want) throw CheckFailed("<u, m> is not all of SL_n(F_l)");
        } else if (*inertia) {
            const auto G = hkl::InertiaGroup::make(load_field(common, p, k), n, /*wild_only=*/pairing && !sweep);
            if (pairing) {
                const auto r = hkl::pairing_dichotomy(G.ctx_ptr(), n);
                std::cout << json{{"n", r.n}, {"q", r.q}, {"ell", r.ell}, {"dim", r.dim}, {"symmetric_dim", r.symmetric_dim},
                                  {"alternating_dim", r.alternating_dim}, {"nondegenerate_alternating", r.nondegenerate_alternating},
                                  {"matches_dichotomy", r.matches_dichotomy}}
                                 .dump()
                          << "\n";
                if (!r.matches_dichotomy) throw CheckFailed("pairing dichotomy fails");
            }
            if (sweep) {
                const auto r = hkl::inertia_sweep(G, common.threads);
                std::cout << json{{"products", r.products}, {"homomorphism", r.homomorphism}, {"det_one", r.det_one},
                                  {"reproduces_m", r.reproduces_m}}
                                 .dump()
                          << "\n";
                if (!(r.homomorphism && r.det_one && r.reproduces_m)) throw CheckFailed("inertia representation check fails");
            }
            if (!pairing && !sweep) {
                const hkl::InertiaElement s{static_cast<hkl::FieldCtx::Code>(a_code), i0};
                std::cout << hkl::io::cyclo_matrix_to_json(G.exact(hkl::CycloRing(p), s)).dump() << "\n";
            }
        } else if (*norm) {
            const auto rep = hkl::normalizer_power_check(hkl::parse_classical_family(family), n, small_q, big_q,
                                                         mode != "sampled", samples, common.seed);
            std::cout << json{{"pass", rep.pass}, {"exhaustive", rep.exhaustive}, {"vacuous", rep.vacuous}, {"examined", rep.examined},
                              {"normalizing", rep.normalizing}, {"normalizing_outside", rep.normalizing_outside}, {"failures", rep.failures}}
                             .dump()
                      << "\n";
            if (!rep.pass) throw CheckFailed("normalizer power property fails");
        } else if (*cls) {
            json survey = json::array();
            for (const auto& d : hkl::candidate_survey(n, ell, f)) survey.push_back(hkl::io::descriptor_to_json(d));
            json excl = json::array();
            for (const auto& e : hkl::geometric_exclusions(n, ell))
                excl.push_back({{"class", e.name}, {"applicable", e.applicable}, {"excluded", e.excluded}, {"bound", e.bound.str()},
                                {"witness", e.witness}});
            std::cout << json{{"n", n}, {"ell", ell}, {"f", f}, {"max_a", hkl::survey_max_a(n, f)}, {"candidates", survey},
                              {"exclusions", excl}}
                             .dump(1)
                      << "\n";
        } else if (*verify) {
            hkl::acceptance::Options opt{golden_dir, common.threads};
            const auto res = hkl::acceptance::run(opt, [](const auto& r) { std::cout << hkl::acceptance::format(r) << std::endl; });
            const auto passed = std::count_if(res.begin(), res.end(), [](const auto& r) { return r.pass; });
            std::cout << passed << "/" << res.size() << " criteria passed\n";
            if (static_cast<std::size_t>(passed) != res.size()) return 1;
        }
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const hkl::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
