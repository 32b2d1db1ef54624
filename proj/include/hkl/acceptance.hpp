#pragma once

// The acceptance suite: thirteen end-to-end checks, each with a time budget.
// Shared by the acceptance test binary and `hkl verify-all`.

#include "hkl/classify.hpp"
#include "hkl/io.hpp"
#include "hkl/kloosterman.hpp"
#include "hkl/matgroup.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace hkl::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double budget = 0.0;
    std::string detail;
};

struct Options {
    std::filesystem::path golden_dir;
    unsigned threads = 1;
};

/// Tables computed during a run, shared between criteria.
class TableStore {
public:
    const KlTable& get(std::uint64_t p, unsigned k, unsigned n, unsigned threads) {
        const auto key = std::tuple{p, k, n};
        auto it = tables_.find(key);
        if (it != tables_.end()) return it->second;
        auto& ctx = fields_[{p, k}];
        if (!ctx) ctx = std::make_shared<const FieldCtx>(FieldCtx::make(p, k));
        return tables_.emplace(key, kl_raw_all(ctx, n, threads)).first->second;
    }
    std::shared_ptr<const FieldCtx> field(std::uint64_t p, unsigned k) {
        auto& ctx = fields_[{p, k}];
        if (!ctx) ctx = std::make_shared<const FieldCtx>(FieldCtx::make(p, k));
        return ctx;
    }
    const std::map<std::tuple<std::uint64_t, unsigned, unsigned>, KlTable>& all() const { return tables_; }

private:
    std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const FieldCtx>> fields_;
    std::map<std::tuple<std::uint64_t, unsigned, unsigned>, KlTable> tables_;
};

/// The field sizes q <= 13 as (p, k).
inline const std::vector<std::pair<std::uint64_t, unsigned>>& small_fields() {
    static const std::vector<std::pair<std::uint64_t, unsigned>> f{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}};
    return f;
}

inline std::string fmt_double(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

struct Context {
    Options opt;
    TableStore store;
};

inline CriterionResult c01_oracle(Context& c) {
    CriterionResult r{1, "oracle equivalence", true, 0, 10, ""};
    std::size_t points = 0;
    for (auto [p, k] : small_fields())
        for (unsigned n = 2; n <= 4; ++n) {
            const KlTable& t = c.store.get(p, k, n, c.opt.threads);
            for (std::uint64_t j = 0; j < t.values.size(); ++j, ++points) {
                if (kl_raw_direct(*t.ctx, n, t.ctx->exp(static_cast<std::int64_t>(j))) != t.values[j]) {
                    r.pass = false;
                    r.detail = "mismatch at q=" + std::to_string(t.q()) + " n=" + std::to_string(n) + " a=g^" + std::to_string(j);
                    return r;
                }
            }
        }
    r.detail = std::to_string(points) + " points equal";
    return r;
}

inline CriterionResult c02_weil(Context& c) {
    CriterionResult r{2, "Weil bound", true, 0, 30, ""};
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{101, 2}, {101, 3}, {499, 2}}) {
        const auto w = weil_bound_check(c.store.get(p, 1, n, c.opt.threads), c.opt.threads);
        r.pass = r.pass && w.pass;
        r.detail += "(" + std::to_string(p) + "," + std::to_string(n) + ") max_ratio=" + fmt_double(w.max_ratio) + " ";
    }
    return r;
}

inline CriterionResult c03_global_sum(Context& c) {
    CriterionResult r{3, "global sum identity", true, 0, 1, ""};
    for (const auto& [key, t] : c.store.all()) {
        const CycloInt s = kl_global_sum(t);
        if (s != t.ring.from_int(t.n % 2 == 0 ? 1 : -1)) {
            r.pass = false;
            r.detail = "fails at q=" + std::to_string(t.q()) + " n=" + std::to_string(t.n);
            return r;
        }
    }
    r.detail = std::to_string(c.store.all().size()) + " tables";
    return r;
}

inline CriterionResult c04_twist(Context& c) {
    CriterionResult r{4, "Galois twist", true, 0, 10, ""};
    std::size_t checks = 0;
    for (auto [p, k] : small_fields())
        for (unsigned n = 2; n <= 4; ++n) {
            const KlTable& t = c.store.get(p, k, n, c.opt.threads);
            for (std::uint64_t u = 1; u < p; ++u, ++checks)
                if (!galois_twist_check(t, u)) {
                    r.pass = false;
                    r.detail = "fails at q=" + std::to_string(t.q()) + " n=" + std::to_string(n) + " u=" + std::to_string(u);
                    return r;
                }
        }
    r.detail = std::to_string(checks) + " (table, u) pairs";
    return r;
}

inline CriterionResult c05_gauss(Context&) {
    CriterionResult r{5, "Gauss sums", true, 0, 10, ""};
    std::vector<std::pair<std::uint64_t, unsigned>> cases{{5, 2}, {7, 2}};
    for (std::uint64_t p = 3; p <= 200; ++p)
        if (is_prime(p)) cases.push_back({p, 1});
    for (auto [p, k] : cases) {
        const FieldCtx F = FieldCtx::make(p, k);
        const CycloRing ring(p);
        const CycloInt g = gauss_sum(ring, F);
        if (ring.mul(g, g) != ring.from_int(chi2_minus_one(F.q()) * static_cast<std::int64_t>(F.q()))) {
            r.pass = false;
            r.detail = "fails at p=" + std::to_string(p) + " k=" + std::to_string(k);
            return r;
        }
    }
    r.detail = std::to_string(cases.size()) + " fields";
    return r;
}

inline CriterionResult c06_trace_field(Context& c) {
    CriterionResult r{6, "trace-field index", true, 0, 10, ""};
    for (auto [p, n, ell] : std::vector<std::array<std::uint64_t, 3>>{{13, 2, 5}, {13, 3, 5}, {5, 2, 11}, {5, 3, 7}}) {
        const KlTable& t = c.store.get(p, 1, static_cast<unsigned>(n), c.opt.threads);
        const std::uint64_t m = (n % 2 == 0 && p % 4 == 3) ? 4 * p : p;
        const ReductionCtx rc = ReductionCtx::make(CycloRing(m), ell);
        const std::uint64_t d = trace_field_degree(kl_reduce_all(t, rc), rc);
        const std::uint64_t want = rc.f() / std::gcd(rc.f(), n);
        r.pass = r.pass && d == want;
        r.detail += "(" + std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(ell) + ") d=" + std::to_string(d) +
                    " f/(f,n)=" + std::to_string(want) + " ";
    }
    return r;
}

inline CriterionResult c07_generation(Context&) {
    CriterionResult r{7, "generation by u and m", true, 0, 60, ""};
    std::uint64_t peak = 0;
    for (auto [n, ell] : std::vector<std::pair<unsigned, std::uint64_t>>{{3, 3}, {3, 5}, {5, 3}}) {
        const FieldCtx F = FieldCtx::make(ell, 1);
        const std::vector<MatFin> gens{elem_u(F, n), elem_m(F, n)};
        const BigInt want = group_order(ClassicalFamily::SL, n, ell);
        const BigInt ss = matrix_group_order(F, gens);
        ClosureOptions opt;
        opt.memory_limit = std::uint64_t{1} << 30;
        if (n == 5) opt.cap = 2'000'000;  // far below 2.4e11: the BFS must report the cap
        const ClosureResult bfs = group_closure(F, gens, opt);
        peak = std::max(peak, bfs.bytes);
        bool ok = ss == want;
        std::string how;
        if (bfs.complete) {
            ok = ok && BigInt(bfs.order) == want;
            how = "bfs=" + std::to_string(bfs.order);
        } else {
            ok = ok && want > opt.cap;
            how = "bfs stopped (" + bfs.stop_reason + ")";
        }
        r.pass = r.pass && ok;
        r.detail += "(" + std::to_string(n) + "," + std::to_string(ell) + ") |SL|=" + want.str() + " schreier-sims=" + ss.str() + " " +
                    how + "; ";
    }
    r.pass = r.pass && peak < (std::uint64_t{2} << 30);
    r.detail += "peak bfs memory " + std::to_string(peak >> 20) + " MiB";
    return r;
}

inline CriterionResult c08_inertia(Context& c) {
    CriterionResult r{8, "inertia representation", true, 0, 60, ""};
    const auto ctx = c.store.field(13, 1);
    for (unsigned n : {2u, 3u}) {
        const auto sw = inertia_sweep(InertiaGroup::make(ctx, n), c.opt.threads);
        r.pass = r.pass && sw.homomorphism && sw.det_one && sw.reproduces_m;
        r.detail += "n=" + std::to_string(n) + ": " + std::to_string(sw.products) + " products, hom=" + (sw.homomorphism ? "ok" : "FAIL") +
                    " det=" + (sw.det_one ? "ok" : "FAIL") + " rho(0,1)=m " + (sw.reproduces_m ? "ok" : "FAIL") + "; ";
    }
    return r;
}

inline CriterionResult c09_pairing(Context& c) {
    CriterionResult r{9, "pairing dichotomy", true, 0, 10, ""};
    const auto ctx = c.store.field(13, 1);
    for (unsigned n : {2u, 3u, 4u}) {
        const auto pr = pairing_dichotomy(ctx, n);
        r.pass = r.pass && pr.matches_dichotomy;
        r.detail += "n=" + std::to_string(n) + " dim=" + std::to_string(pr.dim) + " alt=" + std::to_string(pr.alternating_dim) +
                    (pr.nondegenerate_alternating ? " (nondegenerate)" : "") + "; ";
    }
    return r;
}

inline CriterionResult c10_unipotent(Context&) {
    CriterionResult r{10, "unipotent order", true, 0, 5, ""};
    std::size_t cases = 0;
    for (unsigned n = 2; n <= 20; ++n)
        for (std::uint64_t ell : {2, 3, 5, 7, 11}) {
            ++cases;
            if (unipotent_order(n, ell) != unipotent_order_direct(n, ell)) {
                r.pass = false;
                r.detail = "fails at n=" + std::to_string(n) + " l=" + std::to_string(ell);
                return r;
            }
        }
    r.detail = std::to_string(cases) + " (n, l) pairs";
    return r;
}

inline CriterionResult c11_normalizer(Context&) {
    CriterionResult r{11, "normalizer lemma", true, 0, 30, ""};
    const auto rep = normalizer_power_check(ClassicalFamily::SL, 2, 3, 9, /*exhaustive=*/true);
    r.pass = rep.pass && !rep.vacuous;
    r.detail = "SL_2, F_3 in F_9: " + std::to_string(rep.examined) + " elements, " + std::to_string(rep.normalizing) + " normalizing (" +
               std::to_string(rep.normalizing_outside) + " outside SL_2(F_3)), " + std::to_string(rep.failures) + " failures";
    return r;
}

inline CriterionResult c12_classification(Context& c) {
    CriterionResult r{12, "classification data", true, 0, 5, ""};
    const auto path = c.opt.golden_dir / "classification_tables.json";
    const auto doc = io::json::parse(io::read_file(path));
    std::size_t rows = 0;
    for (const auto& row : doc.at("rows")) {
        ++rows;
        GroupDescriptor d{parse_lie_family(row.at("family").get<std::string>()), row.at("l").get<unsigned>(), row.at("a").get<unsigned>(),
                          row.at("ell").get<std::uint64_t>()};
        if (m_lower(d) != row.at("m_S").get<std::uint64_t>() || out_order(d) != row.at("out_order").get<std::uint64_t>()) {
            r.pass = false;
            r.detail = "row " + std::to_string(rows) + " (" + d.name() + ") disagrees";
            return r;
        }
    }
    const auto survey = candidate_survey(7, 1'000'003, 1);
    const bool g2 = std::any_of(survey.begin(), survey.end(), [](const GroupDescriptor& d) { return d.family == LieFamily::G2 && d.a == 1; });
    r.pass = rows == 20 && g2;
    r.detail = std::to_string(rows) + " golden rows match; survey(7, 1000003, 1) has " + std::to_string(survey.size()) + " entries, G2 " +
               (g2 ? "present" : "MISSING");
    return r;
}

inline CriterionResult c13_sato_tate(Context& c) {
    CriterionResult r{13, "Sato-Tate", true, 0, 60, ""};
    const auto reps = sato_tate_stats({101, 1009, 10007}, 2, c.opt.threads);
    const auto& big = reps.back();
    const double m1 = big.moments[0], m2 = big.moments[1], m4 = big.moments[3];
    const bool moments_ok = std::abs(m1) < 0.1 && std::abs(m2 - 1) < 0.1 && std::abs(m4 - 2) < 0.2;
    const bool ks_ok = reps[0].ks > reps[1].ks && reps[1].ks > reps[2].ks;
    r.pass = moments_ok && ks_ok;
    r.detail = "p=10007: m1=" + fmt_double(m1, 4) + " m2=" + fmt_double(m2, 5) + " m4=" + fmt_double(m4, 5) + "; KS " +
               fmt_double(reps[0].ks, 4) + " > " + fmt_double(reps[1].ks, 4) + " > " + fmt_double(reps[2].ks, 4);
    return r;
}

using Criterion = std::function<CriterionResult(Context&)>;

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{c01_oracle,  c02_weil,       c03_global_sum, c04_twist,        c05_gauss,
                                            c06_trace_field, c07_generation, c08_inertia, c09_pairing, c10_unipotent,
                                            c11_normalizer, c12_classification, c13_sato_tate};
    return all;
}

/// Runs criteria in order (criterion 3 reads the tables built by 1, 2 and 4).
/// Exceptions are reported as failures of the criterion that raised them.
inline std::vector<CriterionResult> run(const Options& opt, const std::function<void(const CriterionResult&)>& on_result = {}) {
    Context ctx{opt, {}};
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = criteria()[i](ctx);
        } catch (const std::exception& e) {
            r.id = static_cast<int>(i + 1);
            r.name = "criterion " + std::to_string(i + 1);
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.budget > 0 && r.seconds > r.budget) {
            r.pass = false;
            r.detail += " [over time budget]";
        }
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string format(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? "0" : "") << r.id << " " << r.name << " (" << fmt_double(r.seconds, 3)
       << " s, budget " << r.budget << " s): " << r.detail;
    return os.str();
}

}  // namespace hkl::acceptance
