#pragma once

// Matrix groups over finite fields: the unipotent u and the monomial m,
// closure and order computations, invariant bilinear forms, the explicit
// inertia representation at infinity and the normalizer power check.

#include "hkl/classify.hpp"
#include "hkl/kloosterman.hpp"
#include "hkl/matrix.hpp"

#include <random>
#include <unordered_set>

namespace hkl {

// --- the elements u and m ---------------------------------------------------

/// Upper unitriangular matrix with ones on the superdiagonal.
inline MatFin elem_u(const FieldCtx& F, unsigned n) {
    if (n < 2) throw DomainError("elem_u: n must be >= 2");
    MatFin u = mat_identity(F, n);
    for (unsigned i = 0; i + 1 < n; ++i) u(i, i + 1) = F.one();
    return u;
}

/// Cyclic shift e_i -> e_{i+1}, e_n -> (-1)^{n+1} e_1.
inline MatFin elem_m(const FieldCtx& F, unsigned n) {
    if (n < 2) throw DomainError("elem_m: n must be >= 2");
    MatFin m = mat_zero(F, n, n);
    for (unsigned i = 0; i + 1 < n; ++i) m(i + 1, i) = F.one();
    m(0, n - 1) = (n % 2 == 1) ? F.one() : F.neg(F.one());
    return m;
}

/// Smallest power of l that is >= n: the order of a regular unipotent in GL_n(F_l).
inline std::uint64_t unipotent_order(std::uint64_t n, std::uint64_t ell) {
    if (!is_prime(ell)) throw DomainError("unipotent_order: l must be prime");
    std::uint64_t r = 1;
    while (r < n) r *= ell;
    return r;
}

/// Order of elem_u(n) over F_l by repeated multiplication.
inline std::uint64_t unipotent_order_direct(unsigned n, std::uint64_t ell) {
    const FieldCtx F = FieldCtx::make(ell, 1, std::nullopt, /*allow_even=*/true);
    auto o = matrix_order(F, elem_u(F, n), n * ell);
    if (!o) throw std::logic_error("unipotent_order_direct: order not found");
    return *o;
}

/// Ranks of (M - I)^j for j = 0..n.
inline std::vector<std::size_t> unipotent_ranks(const FieldCtx& F, const MatFin& M) {
    const MatFin N = mat_sub(F, M, mat_identity(F, M.rows));
    std::vector<std::size_t> out;
    MatFin P = mat_identity(F, M.rows);
    for (std::size_t j = 0; j <= M.rows; ++j) {
        out.push_back(mat_rank(F, P));
        P = mat_mul(F, P, N);
    }
    return out;
}

// --- closure by breadth-first search -----------------------------------------

struct ClosureOptions {
    std::uint64_t cap = 10'000'000;
    std::uint64_t memory_limit = std::uint64_t{1536} << 20;  ///< bytes
};

struct ClosureResult {
    bool complete = false;
    std::uint64_t order = 0;  ///< exact when complete, elements found otherwise
    std::uint64_t bytes = 0;  ///< estimated peak memory
    std::string stop_reason;
};

namespace detail {

class MatPacker {
public:
    MatPacker(std::size_t n, std::uint64_t q) : n_(n) {
        while ((std::uint64_t{1} << bits_) < q) ++bits_;
        words_ = (n * n * bits_ + 63) / 64;
    }
    std::size_t words() const { return words_; }

    void pack(const MatFin& a, std::uint64_t* out) const {
        std::fill(out, out + words_, 0);
        std::size_t pos = 0;
        for (auto c : a.data) {
            for (unsigned b = 0; b < bits_; ++b, ++pos)
                if ((c >> b) & 1u) out[pos / 64] |= std::uint64_t{1} << (pos % 64);
        }
    }
    MatFin unpack(const std::uint64_t* in) const {
        MatFin a(n_, n_, 0);
        std::size_t pos = 0;
        for (auto& c : a.data) {
            FieldCtx::Code v = 0;
            for (unsigned b = 0; b < bits_; ++b, ++pos)
                if ((in[pos / 64] >> (pos % 64)) & 1u) v |= FieldCtx::Code{1} << b;
            c = v;
        }
        return a;
    }

private:
    std::size_t n_;
    unsigned bits_ = 1;
    std::size_t words_ = 1;
};

}  // namespace detail

/// Breadth-first closure of <gens> under right multiplication. When `elements`
/// is given, the group elements are appended to it in discovery order.
inline ClosureResult group_closure(const FieldCtx& F, const std::vector<MatFin>& gens, ClosureOptions opt = {},
                                   std::vector<MatFin>* elements = nullptr) {
    if (gens.empty()) throw DomainError("group_closure: no generators");
    const std::size_t n = gens.front().rows;
    for (const auto& g : gens)
        if (g.rows != n || g.cols != n) throw DomainError("group_closure: generators must share a square dimension");
    const detail::MatPacker pk(n, F.q());
    const std::size_t W = pk.words();
    std::vector<std::uint64_t> store;

    struct Hash {
        const std::vector<std::uint64_t>* st;
        std::size_t W;
        std::size_t operator()(std::size_t idx) const {
            std::uint64_t h = 0xcbf29ce484222325ull;
            for (std::size_t w = 0; w < W; ++w) h = (h ^ (*st)[idx * W + w]) * 0x100000001b3ull ^ (h >> 29);
            return static_cast<std::size_t>(h);
        }
    };
    struct Eq {
        const std::vector<std::uint64_t>* st;
        std::size_t W;
        bool operator()(std::size_t a, std::size_t b) const {
            return std::equal(st->begin() + static_cast<std::ptrdiff_t>(a * W),
                              st->begin() + static_cast<std::ptrdiff_t>((a + 1) * W),
                              st->begin() + static_cast<std::ptrdiff_t>(b * W));
        }
    };
    std::unordered_set<std::size_t, Hash, Eq> seen(16, Hash{&store, W}, Eq{&store, W});

    ClosureResult res;
    auto memory = [&] {
        return store.capacity() * 8 + seen.bucket_count() * sizeof(void*) + seen.size() * 32;
    };
    auto try_add = [&](const MatFin& m) {
        const std::size_t idx = store.size() / W;
        store.resize(store.size() + W);
        pk.pack(m, &store[idx * W]);
        if (!seen.insert(idx).second) {
            store.resize(idx * W);
            return false;
        }
        if (elements) elements->push_back(m);
        return true;
    };

    try_add(mat_identity(F, n));
    for (std::size_t head = 0; head < store.size() / W; ++head) {
        const MatFin cur = pk.unpack(&store[head * W]);
        for (const auto& g : gens) {
            try_add(mat_mul(F, cur, g));
            const std::uint64_t count = store.size() / W;
            res.bytes = std::max<std::uint64_t>(res.bytes, memory());
            if (count > opt.cap) {
                res.order = count;
                res.stop_reason = "cap of " + std::to_string(opt.cap) + " elements exceeded";
                return res;
            }
            if (res.bytes > opt.memory_limit) {
                res.order = count;
                res.stop_reason = "memory limit of " + std::to_string(opt.memory_limit) + " bytes exceeded";
                return res;
            }
        }
    }
    res.complete = true;
    res.order = store.size() / W;
    return res;
}

/// All elements of <gens>; throws if the group has more than `cap` elements.
inline std::vector<MatFin> group_elements(const FieldCtx& F, const std::vector<MatFin>& gens,
                                          std::uint64_t cap = 1'000'000) {
    std::vector<MatFin> out;
    auto r = group_closure(F, gens, {cap, ClosureOptions{}.memory_limit}, &out);
    if (!r.complete) throw DomainError("group_elements: " + r.stop_reason);
    return out;
}

// --- exact order by Schreier-Sims ---------------------------------------------

using Perm = std::vector<std::uint32_t>;

namespace detail {

/// Apply a, then b.
inline Perm compose(const Perm& a, const Perm& b) {
    Perm r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[x] = b[a[x]];
    return r;
}

inline Perm inverse(const Perm& a) {
    Perm r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[a[x]] = static_cast<std::uint32_t>(x);
    return r;
}

inline bool is_identity(const Perm& a) {
    for (std::size_t x = 0; x < a.size(); ++x)
        if (a[x] != x) return false;
    return true;
}

}  // namespace detail

/// Order of a permutation group given by generators (deterministic
/// Schreier-Sims with sifting of all Schreier generators).
inline BigInt permutation_group_order(std::size_t degree, const std::vector<Perm>& gens) {
    using detail::compose;
    using detail::inverse;
    using detail::is_identity;
    std::vector<Perm> S;
    for (const auto& g : gens) {
        if (g.size() != degree) throw DomainError("permutation_group_order: generator of wrong degree");
        if (!is_identity(g)) S.push_back(g);
    }
    if (S.empty()) return 1;

    struct Level {
        std::uint32_t base;
        std::vector<Perm> trans;      // trans[x] maps base to x; empty if x not in the orbit
        std::vector<Perm> trans_inv;
        std::vector<std::uint32_t> orbit;
    };
    std::vector<Level> L;
    auto moved_point = [&](const Perm& g) {
        for (std::uint32_t x = 0; x < degree; ++x)
            if (g[x] != x) return x;
        throw std::logic_error("schreier_sims: identity has no moved point");
    };
    auto level_gens = [&](std::size_t i) {
        std::vector<const Perm*> out;
        for (const auto& s : S) {
            bool fixes = true;
            for (std::size_t k = 0; k < i && fixes; ++k) fixes = s[L[k].base] == L[k].base;
            if (fixes) out.push_back(&s);
        }
        return out;
    };
    auto rebuild = [&](std::size_t i) {
        Level& lv = L[i];
        lv.trans.assign(degree, {});
        lv.trans_inv.assign(degree, {});
        lv.orbit.clear();
        Perm id(degree);
        for (std::uint32_t x = 0; x < degree; ++x) id[x] = x;
        lv.trans[lv.base] = id;
        lv.trans_inv[lv.base] = id;
        lv.orbit.push_back(lv.base);
        const auto gens_i = level_gens(i);
        for (std::size_t h = 0; h < lv.orbit.size(); ++h) {
            const std::uint32_t y = lv.orbit[h];
            for (const Perm* s : gens_i) {
                const std::uint32_t z = (*s)[y];
                if (!lv.trans[z].empty()) continue;
                lv.trans[z] = compose(lv.trans[y], *s);
                lv.trans_inv[z] = inverse(lv.trans[z]);
                lv.orbit.push_back(z);
            }
        }
    };
    auto add_base_point = [&](const Perm& g) {
        L.push_back(Level{moved_point(g), {}, {}, {}});
        rebuild(L.size() - 1);
    };
    // sift h through levels from..end; returns the residue and the level where it stopped
    auto sift = [&](Perm h, std::size_t from) {
        for (std::size_t k = from; k < L.size(); ++k) {
            const std::uint32_t x = h[L[k].base];
            if (L[k].trans[x].empty()) return std::pair{std::move(h), k};
            h = compose(h, L[k].trans_inv[x]);
        }
        return std::pair{std::move(h), L.size()};
    };

    for (const auto& s : S) {
        bool moves_base = false;
        for (const auto& lv : L) moves_base = moves_base || s[lv.base] != lv.base;
        if (!moves_base) L.push_back(Level{moved_point(s), {}, {}, {}});
    }
    for (std::size_t i = 0; i < L.size(); ++i) rebuild(i);

    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(L.size()) - 1;
    while (i >= 0) {
        const std::size_t lvl = static_cast<std::size_t>(i);
        bool restarted = false;
        const auto gens_i = level_gens(lvl);
        for (std::size_t oi = 0; oi < L[lvl].orbit.size() && !restarted; ++oi) {
            const std::uint32_t x = L[lvl].orbit[oi];
            for (const Perm* s : gens_i) {
                const std::uint32_t y = (*s)[x];
                Perm h = compose(compose(L[lvl].trans[x], *s), L[lvl].trans_inv[y]);
                auto [res, j] = sift(std::move(h), lvl + 1);
                if (j == L.size() && is_identity(res)) continue;
                S.push_back(res);
                if (j == L.size()) add_base_point(res);
                for (std::size_t l = lvl + 1; l <= j && l < L.size(); ++l) rebuild(l);
                i = static_cast<std::ptrdiff_t>(std::min(j, L.size() - 1));
                restarted = true;
                break;
            }
        }
        if (!restarted) --i;
    }
    BigInt order = 1;
    for (const auto& lv : L) order *= lv.orbit.size();
    return order;
}

/// Largest F_q^n - {0} on which matrix_group_order will act.
inline constexpr std::uint64_t kMaxActionDegree = 20'000;

/// Permutation of the nonzero vectors of F_q^n induced by v -> M v.
inline Perm vector_action(const FieldCtx& F, const MatFin& M) {
    const std::size_t n = M.rows;
    const std::uint64_t q = F.q();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= q;
    Perm p(total - 1);
    std::vector<FieldCtx::Code> v(n), w(n);
    for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < n; ++i, c /= q) v[i] = static_cast<FieldCtx::Code>(c % q);
        std::uint64_t out = 0, scale = 1;
        for (std::size_t r = 0; r < n; ++r, scale *= q) {
            FieldCtx::Code acc = 0;
            for (std::size_t k = 0; k < n; ++k) acc = F.add(acc, F.mul(M(r, k), v[k]));
            out += acc * scale;
        }
        p[code - 1] = static_cast<std::uint32_t>(out - 1);
    }
    return p;
}

/// Exact order of <gens> via its faithful action on nonzero vectors.
inline BigInt matrix_group_order(const FieldCtx& F, const std::vector<MatFin>& gens) {
    if (gens.empty()) throw DomainError("matrix_group_order: no generators");
    const std::size_t n = gens.front().rows;
    const double deg = std::pow(static_cast<double>(F.q()), static_cast<double>(n)) - 1;
    if (deg > static_cast<double>(kMaxActionDegree))
        throw DomainError("matrix_group_order: q^n - 1 exceeds " + std::to_string(kMaxActionDegree) + " points");
    std::vector<Perm> perms;
    for (const auto& g : gens) perms.push_back(vector_action(F, g));
    return permutation_group_order(static_cast<std::size_t>(deg), perms);
}

// --- invariant bilinear forms ----------------------------------------------------

struct BilinearSpace {
    std::vector<MatFin> basis;        ///< all A with g^T A g = A
    std::vector<MatFin> symmetric;    ///< basis of the symmetric ones
    std::vector<MatFin> alternating;  ///< basis of the alternating ones
    bool nondegenerate_alternating = false;
    bool search_exhaustive = false;   ///< whether the nondegeneracy search covered the whole space
    std::optional<MatFin> witness;
};

namespace detail {

inline std::vector<MatFin> solve_forms(const FieldCtx& F, const std::vector<MatFin>& gens, std::size_t n, int extra) {
    const std::size_t N = n * n;
    std::vector<std::vector<FieldCtx::Code>> rows;
    for (const auto& g : gens) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                std::vector<FieldCtx::Code> row(N, 0);
                // (g^T A g)_{rc} = sum_{i,j} g_{ir} A_{ij} g_{jc}
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) row[i * n + j] = F.mul(g(i, r), g(j, c));
                row[r * n + c] = F.sub(row[r * n + c], F.one());
                rows.push_back(std::move(row));
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (extra == 1 && i < j) {  // symmetric
                std::vector<FieldCtx::Code> row(N, 0);
                row[i * n + j] = F.one();
                row[j * n + i] = F.neg(F.one());
                rows.push_back(std::move(row));
            }
            if (extra == 2 && i <= j) {  // alternating
                std::vector<FieldCtx::Code> row(N, 0);
                row[i * n + j] = F.one();
                row[j * n + i] = F.add(row[j * n + i], i == j ? 0 : F.one());
                rows.push_back(std::move(row));
            }
        }
    MatFin A(rows.size(), N, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < N; ++c) A(r, c) = rows[r][c];
    std::vector<MatFin> out;
    for (auto& v : nullspace(F, std::move(A))) {
        MatFin m(n, n, 0);
        m.data = std::move(v);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace detail

/// Basis of {A : g^T A g = A for all g in gens} with its symmetric and
/// alternating parts, plus a search for a nondegenerate alternating form.
inline BilinearSpace invariant_bilinear(const FieldCtx& F, const std::vector<MatFin>& gens, std::size_t n,
                                        std::uint64_t seed = 0) {
    for (const auto& g : gens)
        if (g.rows != n || g.cols != n) throw DomainError("invariant_bilinear: generator dimension mismatch");
    BilinearSpace s;
    s.basis = detail::solve_forms(F, gens, n, 0);
    s.symmetric = detail::solve_forms(F, gens, n, 1);
    s.alternating = detail::solve_forms(F, gens, n, 2);
    const std::size_t d = s.alternating.size();
    if (d == 0) {
        s.search_exhaustive = true;
        return s;
    }
    auto combo = [&](const std::vector<FieldCtx::Code>& c) {
        MatFin m(n, n, 0);
        for (std::size_t b = 0; b < d; ++b) {
            if (c[b] == 0) continue;
            for (std::size_t e = 0; e < m.data.size(); ++e)
                m.data[e] = F.add(m.data[e], F.mul(c[b], s.alternating[b].data[e]));
        }
        return m;
    };
    auto test = [&](const MatFin& m) {
        if (det_field(F, m) == 0) return false;
        s.nondegenerate_alternating = true;
        s.witness = m;
        return true;
    };
    for (const auto& b : s.alternating)
        if (test(b)) return s;
    const double space = std::pow(static_cast<double>(F.q()), static_cast<double>(d));
    if (space <= 200'000) {
        std::vector<FieldCtx::Code> c(d, 0);
        for (;;) {
            std::size_t pos = 0;
            while (pos < d && ++c[pos] == F.q()) c[pos++] = 0;
            if (pos == d) break;
            if (test(combo(c))) return s;
        }
        s.search_exhaustive = true;
        return s;
    }
    std::mt19937_64 rng(seed);
    std::vector<FieldCtx::Code> c(d);
    for (int trial = 0; trial < 2000; ++trial) {
        for (auto& x : c) x = static_cast<FieldCtx::Code>(rng() % F.q());
        if (test(combo(c))) return s;
    }
    return s;
}

// --- inertia at infinity -------------------------------------------------------------

struct InertiaElement {
    FieldCtx::Code a0 = 0;
    std::uint64_t i0 = 0;  ///< residue mod 2n
    bool operator==(const InertiaElement&) const = default;
};

/// The semidirect product F_q x Z/2n with (a,i)(b,j) = (a + zeta_n^{-i} b, i+j)
/// and its n-dimensional representation.
class InertiaGroup {
public:
    /// Full group: needs 2n | q-1. With `wild_only`, only the elements (a, 0)
    /// are used and n | q-1 suffices.
    static InertiaGroup make(std::shared_ptr<const FieldCtx> ctx, unsigned n, bool wild_only = false) {
        if (n < 2) throw DomainError("inertia: n must be >= 2");
        const std::uint64_t q1 = ctx->q() - 1;
        InertiaGroup g;
        g.ctx_ = std::move(ctx);
        g.n_ = n;
        g.wild_only_ = wild_only;
        if (q1 % (2 * n) == 0) {
            g.zeta_2n_ = g.ctx_->least_element_of_order(2 * n);
            g.zeta_n_ = g.ctx_->mul(*g.zeta_2n_, *g.zeta_2n_);
        } else if (wild_only && q1 % n == 0) {
            g.zeta_n_ = g.ctx_->least_element_of_order(n);
        } else {
            throw DomainError("inertia: need " + std::to_string(wild_only ? n : 2 * n) + " | q-1 (q = " +
                              std::to_string(g.ctx_->q()) + ")");
        }
        return g;
    }

    const FieldCtx& ctx() const { return *ctx_; }
    std::shared_ptr<const FieldCtx> ctx_ptr() const { return ctx_; }
    unsigned n() const { return n_; }
    bool wild_only() const { return wild_only_; }
    FieldCtx::Code zeta_n() const { return zeta_n_; }
    std::optional<FieldCtx::Code> zeta_2n() const { return zeta_2n_; }
    std::uint64_t order() const { return ctx_->q() * (wild_only_ ? 1 : 2 * n_); }

    InertiaElement compose(const InertiaElement& s, const InertiaElement& t) const {
        check(s);
        check(t);
        const FieldCtx& F = *ctx_;
        const FieldCtx::Code twist = F.pow(zeta_n_, -static_cast<std::int64_t>(s.i0 % n_));
        return {F.add(s.a0, F.mul(twist, t.a0)), (s.i0 + t.i0) % (2 * n_)};
    }

    std::vector<InertiaElement> elements() const {
        std::vector<InertiaElement> out;
        for (std::uint64_t a = 0; a < ctx_->q(); ++a)
            for (std::uint64_t i = 0; i < (wild_only_ ? 1 : 2 * n_); ++i)
                out.push_back({static_cast<FieldCtx::Code>(a), i});
        return out;
    }

    /// tr(n a0 zeta_n^i) for the 1-based row i.
    std::uint64_t wild_exponent(FieldCtx::Code a0, unsigned i) const {
        const FieldCtx& F = *ctx_;
        return F.trace(F.mul(F.mul(F.from_int(n_), a0), F.pow(zeta_n_, i)));
    }

    /// Nonzero pattern and sign of entry (i, j), 1-based: nullopt when i - j != i0 mod n.
    std::optional<bool> entry_negative(const InertiaElement& s, unsigned i, unsigned j) const {
        const std::int64_t d = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i) + static_cast<std::int64_t>(s.i0);
        if (mod_floor(d, n_) != 0) return std::nullopt;
        const std::int64_t k = d / static_cast<std::int64_t>(n_);  // d is a multiple of n in (-n, 3n)
        return ((static_cast<std::int64_t>(n_) + 1) * k) % 2 != 0;
    }

    /// Exact matrix over Z[zeta_m] for a ring with p | m.
    Mat<CycloInt> exact(const CycloRing& ring, const InertiaElement& s) const {
        check(s);
        const std::uint64_t p = ctx_->p();
        Mat<CycloInt> M(n_, n_, ring.zero());
        for (unsigned i = 1; i <= n_; ++i)
            for (unsigned j = 1; j <= n_; ++j)
                if (auto neg = entry_negative(s, i, j)) {
                    CycloInt z = ring.root_of_unity(p, static_cast<std::int64_t>(wild_exponent(s.a0, i)));
                    M(i - 1, j - 1) = *neg ? ring.neg(z) : z;
                }
        return M;
    }

    /// Matrix over the residue field of rc (which must be tabled).
    MatFin reduced(const ReductionCtx& rc, const InertiaElement& s) const {
        check(s);
        const FieldCtx* R = rc.tabled();
        if (!R) throw DomainError("inertia: residue field too large for table-based matrices");
        const std::uint64_t p = ctx_->p();
        MatFin M(n_, n_, 0);
        for (unsigned i = 1; i <= n_; ++i)
            for (unsigned j = 1; j <= n_; ++j)
                if (auto neg = entry_negative(s, i, j)) {
                    const FieldCtx::Code z =
                        R->encode(rc.root_of_unity(p, static_cast<std::int64_t>(wild_exponent(s.a0, i))));
                    M(i - 1, j - 1) = *neg ? R->neg(z) : z;
                }
        return M;
    }

private:
    void check(const InertiaElement& s) const {
        if (s.a0 >= ctx_->q()) throw DomainError("inertia: a0 is not a field element code");
        if (s.i0 >= 2 * n_) throw DomainError("inertia: i0 must lie in [0, 2n)");
        if (wild_only_ && s.i0 != 0) throw DomainError("inertia: wild-only group has i0 = 0");
    }

    std::shared_ptr<const FieldCtx> ctx_;
    unsigned n_ = 0;
    bool wild_only_ = false;
    FieldCtx::Code zeta_n_ = 1;
    std::optional<FieldCtx::Code> zeta_2n_;
};

struct InertiaSweep {
    bool homomorphism = true;
    bool det_one = true;
    bool reproduces_m = false;
    std::uint64_t products = 0;
    std::optional<std::pair<InertiaElement, InertiaElement>> first_failure;
};

/// Exact check over Z[zeta_p] of rho(st) = rho(s) rho(t) for all pairs and
/// det rho(s) = 1 for all s; also compares rho(0, 1) with elem_m.
inline InertiaSweep inertia_sweep(const InertiaGroup& G, unsigned threads = 1) {
    if (G.wild_only()) throw DomainError("inertia_sweep: needs the full group");
    const CycloRing ring(G.ctx().p());
    const auto els = G.elements();
    std::vector<Mat<CycloInt>> mats(els.size());
    parallel_for(els.size(), threads, [&](std::size_t k) { mats[k] = G.exact(ring, els[k]); });
    auto index_of = [&](const InertiaElement& s) { return static_cast<std::size_t>(s.a0) * 2 * G.n() + s.i0; };

    InertiaSweep out;
    std::vector<char> hom_ok(els.size(), 1), det_ok(els.size(), 1);
    parallel_for(els.size(), threads, [&](std::size_t a) {
        det_ok[a] = det_expand(ring, mats[a]) == ring.one();
        for (std::size_t b = 0; b < els.size(); ++b) {
            const auto c = G.compose(els[a], els[b]);
            if (mat_mul(ring, mats[a], mats[b]) != mats[index_of(c)]) {
                hom_ok[a] = 0;
                break;
            }
        }
    });
    out.products = els.size() * els.size();
    for (std::size_t a = 0; a < els.size(); ++a) {
        out.homomorphism = out.homomorphism && hom_ok[a];
        out.det_one = out.det_one && det_ok[a];
    }

    Mat<CycloInt> m(G.n(), G.n(), ring.zero());
    for (unsigned i = 0; i + 1 < G.n(); ++i) m(i + 1, i) = ring.one();
    m(0, G.n() - 1) = (G.n() % 2 == 1) ? ring.one() : ring.neg(ring.one());
    out.reproduces_m = mats[index_of({0, 1})] == m;
    return out;
}

/// Least prime l = 1 mod p, so that F_l contains the p-th roots of unity.
inline std::uint64_t least_split_prime(std::uint64_t p) {
    for (std::uint64_t ell = p + 1;; ell += p)
        if (is_prime(ell)) return ell;
}

struct PairingReport {
    unsigned n = 0;
    std::uint64_t q = 0, ell = 0;
    std::size_t dim = 0, symmetric_dim = 0, alternating_dim = 0;
    bool nondegenerate_alternating = false;
    /// zero space for odd n; nonzero space with alternating forms for even n
    bool matches_dichotomy = false;
};

/// Invariant bilinear forms of the wild part {rho(a, 0) : a in F_q} over F_l,
/// l the least prime = 1 mod p.
inline PairingReport pairing_dichotomy(std::shared_ptr<const FieldCtx> ctx, unsigned n) {
    const InertiaGroup G = InertiaGroup::make(ctx, n, /*wild_only=*/true);
    const std::uint64_t ell = least_split_prime(ctx->p());
    const CycloRing ring(ctx->p());
    const ReductionCtx rc = ReductionCtx::make(ring, ell);
    std::vector<MatFin> gens;
    for (const auto& s : G.elements()) gens.push_back(G.reduced(rc, s));
    const BilinearSpace sp = invariant_bilinear(*rc.tabled(), gens, n);
    PairingReport r;
    r.n = n;
    r.q = ctx->q();
    r.ell = ell;
    r.dim = sp.basis.size();
    r.symmetric_dim = sp.symmetric.size();
    r.alternating_dim = sp.alternating.size();
    r.nondegenerate_alternating = sp.nondegenerate_alternating;
    r.matches_dichotomy = (n % 2 == 1) ? r.dim == 0 : (r.dim > 0 && r.alternating_dim > 0);
    return r;
}

/// Degree over F_l of the field generated by the reduced traces of rho(a, 0).
inline std::uint64_t inertia_trace_field_degree(const InertiaGroup& G, const ReductionCtx& rc) {
    const std::uint64_t p = G.ctx().p();
    const CycloRing ring(p);
    std::vector<FqElem> values;
    for (std::uint64_t a = 0; a < G.ctx().q(); ++a) {
        CycloInt tr = ring.zero();
        for (unsigned i = 1; i <= G.n(); ++i)
            tr = ring.add(tr, ring.zeta_pow(static_cast<std::int64_t>(G.wild_exponent(static_cast<FieldCtx::Code>(a), i))));
        values.push_back(rc.reduce(tr));
    }
    return trace_field_degree(values, rc);
}

// --- normalizer power check -----------------------------------------------------------

/// Generators of G(k) inside G(L) for G = SL_n or Sp_n (standard alternating
/// form [[0, I], [-I, 0]]), using elementary or symplectic transvections with
/// coefficients from an additive basis of the subfield of degree d.
inline std::vector<MatFin> classical_generators(const FieldCtx& L, ClassicalFamily fam, unsigned n, unsigned d) {
    if (L.k() % d != 0) throw DomainError("classical_generators: subfield degree must divide the field degree");
    std::uint64_t sub_q = 1;
    for (unsigned i = 0; i < d; ++i) sub_q *= L.p();
    const FieldCtx::Code gamma = L.exp(static_cast<std::int64_t>((L.q() - 1) / (sub_q - 1)));
    std::vector<FieldCtx::Code> basis;
    for (unsigned i = 0; i < d; ++i) basis.push_back(L.pow(gamma, i));

    std::vector<MatFin> gens;
    if (fam == ClassicalFamily::SL) {
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                if (i != j)
                    for (auto c : basis) {
                        MatFin t = mat_identity(L, n);
                        t(i, j) = c;
                        gens.push_back(std::move(t));
                    }
        return gens;
    }
    if (fam != ClassicalFamily::Sp) throw DomainError("classical_generators: only SL and Sp are supported");
    if (n % 2 != 0) throw DomainError("classical_generators: Sp needs even dimension");
    const unsigned m = n / 2;
    MatFin J = mat_zero(L, n, n);
    for (unsigned i = 0; i < m; ++i) {
        J(i, m + i) = L.one();
        J(m + i, i) = L.neg(L.one());
    }
    std::vector<std::vector<FieldCtx::Code>> vs;
    for (unsigned i = 0; i < n; ++i) {
        std::vector<FieldCtx::Code> v(n, 0);
        v[i] = 1;
        vs.push_back(v);
        for (unsigned j = i + 1; j < n; ++j) {
            auto w = v;
            w[j] = 1;
            vs.push_back(w);
        }
    }
    for (const auto& v : vs) {
        std::vector<FieldCtx::Code> Jv(n, 0);
        for (unsigned r = 0; r < n; ++r)
            for (unsigned c = 0; c < n; ++c) Jv[r] = L.add(Jv[r], L.mul(J(r, c), v[c]));
        for (auto c : basis) {
            // x -> x + c <x, v> v, i.e. I + c v (Jv)^T
            MatFin t = mat_identity(L, n);
            for (unsigned r = 0; r < n; ++r)
                for (unsigned s = 0; s < n; ++s) t(r, s) = L.add(t(r, s), L.mul(c, L.mul(v[r], Jv[s])));
            gens.push_back(std::move(t));
        }
    }
    return gens;
}

struct NormalizerReport {
    bool pass = true;
    bool exhaustive = false;
    bool vacuous = false;              ///< no normalizing element outside G(k) was examined
    std::uint64_t examined = 0;
    std::uint64_t normalizing = 0;
    std::uint64_t normalizing_outside = 0;  ///< normalizing elements not in G(k)
    std::uint64_t failures = 0;
    std::optional<MatFin> witness;     ///< a normalizing element outside G(k), if seen
};

inline constexpr std::uint64_t kNormalizerExhaustiveLimit = 1'000'000;

/// Checks that every g in G(L) normalizing G(k) has g^n in G(k), where k has
/// small_q elements and L has big_q elements.
inline NormalizerReport normalizer_power_check(ClassicalFamily fam, unsigned n, std::uint64_t small_q,
                                               std::uint64_t big_q, bool exhaustive, std::uint64_t samples = 10'000,
                                               std::uint64_t seed = 0) {
    if (n < 2) throw DomainError("normalizer_power_check: n must be >= 2");
    const auto [p, D] = prime_power_decomposition(big_q);
    const auto [p2, d] = prime_power_decomposition(small_q);
    if (p == 0 || p2 != p || D % d != 0)
        throw DomainError("normalizer_power_check: need prime powers with F_" + std::to_string(small_q) + " a subfield of F_" +
                          std::to_string(big_q));
    const FieldCtx L = FieldCtx::make(p, D, std::nullopt, /*allow_even=*/true);
    std::vector<char> in_k(L.q(), 0);
    for (auto c : L.subfield(d)) in_k[c] = 1;
    auto in_small = [&](const MatFin& g) {
        for (auto c : g.data)
            if (!in_k[c]) return false;
        return true;
    };
    const auto big_gens = classical_generators(L, fam, n, D);
    const auto small_gens = classical_generators(L, fam, n, d);

    NormalizerReport rep;
    rep.exhaustive = exhaustive;
    auto examine = [&](const MatFin& g) {
        ++rep.examined;
        const auto ginv = mat_inverse(L, g);
        if (!ginv) throw std::logic_error("normalizer_power_check: singular group element");
        for (const auto& h : small_gens)
            if (!in_small(mat_mul(L, mat_mul(L, g, h), *ginv))) return;
        ++rep.normalizing;
        if (!in_small(g)) {
            ++rep.normalizing_outside;
            if (!rep.witness) rep.witness = g;
        }
        if (!in_small(mat_pow(L, g, n))) {
            ++rep.failures;
            rep.pass = false;
        }
    };

    if (exhaustive) {
        const BigInt expected = group_order(fam, n, big_q);
        if (expected > kNormalizerExhaustiveLimit)
            throw DomainError("normalizer_power_check: |G(L)| = " + expected.str() + " exceeds the exhaustive limit 10^6");
        const auto els = group_elements(L, big_gens, kNormalizerExhaustiveLimit);
        if (BigInt(els.size()) != expected)
            throw std::logic_error("normalizer_power_check: generated " + std::to_string(els.size()) + " elements, expected " +
                                   expected.str());
        for (const auto& g : els) examine(g);
    } else {
        std::mt19937_64 rng(seed);
        std::vector<FieldCtx::Code> central;
        for (std::uint64_t c = 1; c < L.q(); ++c) {
            const auto z = static_cast<FieldCtx::Code>(c);
            const bool ok = fam == ClassicalFamily::SL ? L.pow(z, static_cast<std::int64_t>(n)) == L.one()
                                                        : L.mul(z, z) == L.one();
            if (ok) central.push_back(z);
        }
        auto random_word = [&](const std::vector<MatFin>& gens) {
            MatFin g = mat_identity(L, n);
            for (int s = 0; s < 64; ++s) g = mat_mul(L, g, gens[rng() % gens.size()]);
            return g;
        };
        for (std::uint64_t t = 0; t < samples; ++t) {
            if (t % 2 == 0) {
                examine(random_word(big_gens));
            } else {
                MatFin g = random_word(small_gens);
                const auto z = central[rng() % central.size()];
                for (auto& c : g.data) c = L.mul(c, z);
                examine(g);
            }
        }
    }
    rep.vacuous = rep.normalizing_outside == 0;
    return rep;
}

}  // namespace hkl
