#include "qrsmem/decode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrsmem/errors.hpp"
#include "qrsmem/gf_kernels.hpp"
#include "qrsmem/grs.hpp"

namespace qrsmem {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Advances idx to the next w-subset of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t w = idx.size();
    std::size_t i = w;
    while (i > 0) {
        --i;
        if (idx[i] < n - w + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_combination(std::size_t w) {
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    return idx;
}

double binom_d(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1));
}

}  // namespace

DecodeResult decode_min_weight(const FieldCtx& f, const Matrix& h, const Vec& y, std::size_t w_max,
                               std::uint64_t seed) {
    const std::size_t n = h.cols;
    if (y.size() != h.rows) throw DimensionMismatch("syndrome length");
    if (w_max > n) throw BadParameters("w_max > n");
    double supports = 0;
    for (std::size_t w = 0; w <= w_max; ++w) supports += binom_d(n, w);
    if (supports > 1e7) throw TooLarge("more than 1e7 supports to enumerate");

    DecodeResult res;
    res.seed = seed;
    for (std::size_t w = 0; w <= w_max; ++w) {
        if (w == 0) {
            if (std::all_of(y.begin(), y.end(), [](Elem e) { return e == 0; })) {
                res.corrections.push_back(Vec(n, 0));
                break;
            }
            continue;
        }
        auto idx = first_combination(w);
        do {
            const Matrix sub = select_columns(h, idx);
            const auto x0 = solve(f, sub, y);
            if (!x0) continue;
            const Matrix ker = nullspace(f, sub);
            const double combos = std::pow(static_cast<double>(f.q()), static_cast<double>(ker.rows));
            if (combos > 1e6) throw TooLarge("solution space on one support is too large");
            std::vector<std::uint32_t> lam(ker.rows, 0);
            while (true) {
                Vec x = *x0;
                for (std::size_t r = 0; r < ker.rows; ++r)
                    for (std::size_t c = 0; c < w; ++c) x[c] ^= f.mul(static_cast<Elem>(lam[r]), ker(r, c));
                if (std::all_of(x.begin(), x.end(), [](Elem e) { return e != 0; })) {
                    Vec full(n, 0);
                    for (std::size_t c = 0; c < w; ++c) full[idx[c]] = x[c];
                    res.corrections.push_back(std::move(full));
                }
                std::size_t i = 0;
                while (i < lam.size() && ++lam[i] == f.q()) lam[i++] = 0;
                if (i == lam.size()) break;
            }
        } while (next_combination(idx, n));
        if (!res.corrections.empty()) {
            res.weight = w;
            break;
        }
    }
    if (res.corrections.empty()) throw NoSolutionWithinBound("no correction of weight <= " + std::to_string(w_max));
    Rng rng(seed);
    res.chosen = res.corrections[uniform_below(rng, res.corrections.size())];
    return res;
}

std::vector<Vec> coset_min_weight_bruteforce(const FieldCtx& f, const Matrix& h, const Vec& y) {
    const std::size_t n = h.cols;
    if (std::pow(static_cast<double>(f.q()), static_cast<double>(n)) > 1e7) throw TooLarge("q^n > 1e7");
    std::vector<Vec> best;
    std::size_t best_w = n + 1;
    Vec x(n, 0);
    while (true) {
        const std::size_t w = weight(x);
        if (w <= best_w && mat_vec(f, h, x) == y) {
            if (w < best_w) {
                best.clear();
                best_w = w;
            }
            best.push_back(x);
        }
        std::size_t i = 0;
        while (i < n && ++x[i] == f.q()) x[i++] = 0;
        if (i == n) break;
    }
    return best;
}

double analytic_uncorrectable_fraction(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q) {
    const double N = static_cast<double>(n);
    const double Q = static_cast<double>(q) - 1.0;
    auto clamp0 = [](double v) { return std::max(0.0, v); };
    if (d == 4 && e == 2) return clamp0((N - 2) * (N - 3) / (2 * Q));
    if (d == 5 && e == 3) return clamp0((N - 3) * (N - 4) / (2 * Q * Q));
    if (d == 6 && e == 3) return clamp0((N - 3) * (N - 4) * (N - 5) / (6 * Q * Q));
    if (d == 7 && e == 4) return clamp0((N - 4) * (N - 5) * (N - 6) / (6 * Q * Q * Q));
    if (d == 8 && e == 4) return clamp0((N - 4) * (N - 5) * (N - 6) * (N - 7) / (24 * Q * Q * Q));
    if ((d == 8 || d == 9) && e == 5) {
        const Rational w9 = Rational(mds_weight_count(n, d, 9, q));
        const Rational w10 = Rational(mds_weight_count(n, d, 10, q));
        Rational num = 126 * w9 + 252 * w10;
        if (d == 8) num += 56 * Rational(mds_weight_count(n, d, 8, q));
        const Rational den = Rational(boost::multiprecision::pow(BigInt(q - 1), 5)) * Rational(binomial(static_cast<long long>(n), 5));
        if (den == 0) return 0.0;
        return static_cast<double>(num / den);
    }
    throw Uncovered("no closed form for d=" + std::to_string(d) + ", e=" + std::to_string(e));
}

double expected_same_weight_collisions(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q) {
    // A pair (err, err') differs by a codeword c of weight w <= 2e. On supp(c), t
    // positions carry both errors (q-2 value choices) and the rest split evenly;
    // off supp(c), u positions carry equal nonzero values.
    Rational pairs = 0;
    for (std::size_t w = d; w <= 2 * e && w <= n; ++w) {
        const BigInt aw = mds_weight_count(n, d, w, q);
        if (aw == 0) continue;
        BigInt per = 0;
        for (std::size_t t = 0; t <= w; ++t) {
            if ((w - t) % 2) continue;
            const std::size_t a = (w - t) / 2;
            if (a + t > e) continue;
            const std::size_t u = e - a - t;
            if (u > n - w) continue;
            per += binomial(static_cast<long long>(w), static_cast<long long>(t)) *
                   binomial(static_cast<long long>(w - t), static_cast<long long>(a)) *
                   boost::multiprecision::pow(BigInt(q - 2), static_cast<unsigned>(t)) *
                   binomial(static_cast<long long>(n - w), static_cast<long long>(u)) *
                   boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(u));
        }
        pairs += Rational(aw * per);
    }
    const Rational total = Rational(binomial(static_cast<long long>(n), static_cast<long long>(e)) *
                                    boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(e)));
    if (total == 0) return 0.0;
    return static_cast<double>(pairs / total);
}

double FractionTable::fraction(std::size_t k) const {
    auto it = counts.find(k);
    if (it == counts.end() || samples == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(samples);
}

double FractionTable::stderr_of(std::size_t k) const {
    const double p = fraction(k);
    return samples ? std::sqrt(p * (1 - p) / static_cast<double>(samples)) : 0.0;
}

double FractionTable::total() const {
    double t = 0;
    for (auto [k, c] : counts)
        if (k >= 1) t += static_cast<double>(c);
    return samples ? t / static_cast<double>(samples) : 0.0;
}

double FractionTable::total_stderr() const {
    const double p = total();
    return samples ? std::sqrt(p * (1 - p) / static_cast<double>(samples)) : 0.0;
}

double FractionTable::weighted_mass() const {
    double m = 0;
    for (auto [k, c] : counts)
        if (k >= 1) m += static_cast<double>(k) / static_cast<double>(k + 1) * static_cast<double>(c);
    return samples ? m / static_cast<double>(samples) : 0.0;
}

std::string FractionTable::to_csv(bool header) const {
    std::ostringstream out;
    out.precision(17);
    if (header) out << "n,d,e,k,fraction,stderr,samples,seed\n";
    for (auto [k, c] : counts) {
        out << n << ',' << d << ',' << e << ',' << k << ',' << fraction(k) << ',' << stderr_of(k) << ',' << samples
            << ',' << seed << '\n';
    }
    return out.str();
}

std::vector<FractionTable> FractionTable::from_csv(const std::string& text) {
    std::vector<FractionTable> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("n,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw ParseError("fraction CSV row needs 8 cells: " + line);
        try {
            const std::size_t n = std::stoul(cells[0]), d = std::stoul(cells[1]), e = std::stoul(cells[2]);
            const std::size_t k = std::stoul(cells[3]);
            const double frac = std::stod(cells[4]);
            const std::uint64_t samples = std::stoull(cells[6]), seed = std::stoull(cells[7]);
            if (out.empty() || out.back().n != n || out.back().d != d || out.back().e != e) {
                FractionTable t;
                t.n = n;
                t.d = d;
                t.e = e;
                t.samples = samples;
                t.seed = seed;
                out.push_back(t);
            }
            out.back().counts[k] = static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(samples)));
        } catch (const std::logic_error&) {
            throw ParseError("bad number in fraction CSV row: " + line);
        }
    }
    return out;
}

CollisionCounter::CollisionCounter(const FieldCtx& f, const Matrix& h) : f_(f), h_(h) {}

std::size_t CollisionCounter::count_others(const Vec& err) const {
    const std::size_t n = h_.cols, r = h_.rows;
    std::vector<std::size_t> supp;
    for (std::size_t j = 0; j < n; ++j)
        if (err[j]) supp.push_back(j);
    const std::size_t e = supp.size();
    if (e == 0) return 0;
    if (e > r) throw TooLarge("collision counting needs weight <= number of checks");
    const Vec y = mat_vec(f_, h_, err);

    std::size_t count = 0;
    std::vector<Elem> a(e * r);
    std::vector<Elem> null(r * r);
    std::vector<Elem> acc(n), mask(n);
    std::vector<std::size_t> tset = first_combination(e - 1);
    bool more = true;
    while (more) {
        // Rows: the columns of h on tset, then y. Annihilator of their span.
        for (std::size_t i = 0; i + 1 < e; ++i)
            for (std::size_t c = 0; c < r; ++c) a[i * r + c] = h_(c, tset[i]);
        for (std::size_t c = 0; c < r; ++c) a[(e - 1) * r + c] = y[c];
        std::vector<std::size_t> piv;
        std::size_t row = 0;
        for (std::size_t c = 0; c < r && row < e; ++c) {
            std::size_t p = row;
            while (p < e && a[p * r + c] == 0) ++p;
            if (p == e) continue;
            if (p != row)
                for (std::size_t j = 0; j < r; ++j) std::swap(a[p * r + j], a[row * r + j]);
            const Elem iv = f_.inv(a[row * r + c]);
            for (std::size_t j = 0; j < r; ++j) a[row * r + j] = f_.mul(a[row * r + j], iv);
            for (std::size_t i = 0; i < e; ++i) {
                if (i == row || a[i * r + c] == 0) continue;
                const Elem m = a[i * r + c];
                for (std::size_t j = 0; j < r; ++j) a[i * r + j] ^= f_.mul(m, a[row * r + j]);
            }
            piv.push_back(c);
            ++row;
        }
        if (piv.size() == e) {
            std::vector<bool> is_piv(r, false);
            for (auto p : piv) is_piv[p] = true;
            std::size_t nn = 0;
            for (std::size_t fr = 0; fr < r; ++fr) {
                if (is_piv[fr]) continue;
                Elem* w = null.data() + nn * r;
                std::fill(w, w + r, Elem{0});
                w[fr] = 1;
                for (std::size_t i = 0; i < piv.size(); ++i) w[piv[i]] = a[i * r + fr];
                ++nn;
            }
            std::fill(mask.begin(), mask.end(), Elem{0});
            for (std::size_t t = 0; t < nn; ++t) {
                kernels::dot_columns(f_, null.data() + t * r, r, h_.data.data(), n, acc.data(), n);
                for (std::size_t j = 0; j < n; ++j) mask[j] |= acc[j];
            }
            const std::size_t start = tset.empty() ? 0 : tset.back() + 1;
            for (std::size_t j = start; j < n; ++j) {
                if (mask[j]) continue;
                std::vector<std::size_t> cand = tset;
                cand.push_back(j);
                const auto x = solve(f_, select_columns(h_, cand), y);
                if (!x || std::any_of(x->begin(), x->end(), [](Elem v) { return v == 0; })) continue;
                if (cand == supp) continue;
                ++count;
            }
        }
        more = e > 1 && next_combination(tset, n);
    }
    return count;
}

Vec random_weight_error(const FieldCtx& f, std::size_t n, std::size_t e, Rng& rng) {
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = i;
    for (std::size_t i = 0; i < e; ++i) std::swap(pos[i], pos[i + uniform_below(rng, n - i)]);
    Vec err(n, 0);
    for (std::size_t i = 0; i < e; ++i) err[pos[i]] = static_cast<Elem>(1 + uniform_below(rng, f.q() - 1));
    return err;
}

FractionTable estimate_fraction_table(const FieldCtx& f, const Matrix& h, std::size_t d, std::size_t e,
                                      std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
    if (e == 0 || e > h.rows) throw TooLarge("weight must be between 1 and the number of checks");
    if (binom_d(h.cols, e - 1) * static_cast<double>(samples) > 5e10) throw TooLarge("fraction estimate too expensive");
    FractionTable table;
    table.n = h.cols;
    table.d = d;
    table.e = e;
    table.samples = samples;
    table.seed = seed;
    // Fixed-size chunks with their own streams keep results independent of jobs.
    constexpr std::uint64_t kChunk = 256;
    const std::uint64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::map<std::size_t, std::uint64_t>> per_chunk(nchunks);
    CollisionCounter counter(f, h);
    auto work = [&](unsigned worker) {
        for (std::uint64_t c = worker; c < nchunks; c += std::max(1u, jobs)) {
            Rng rng = derive_rng(seed, {0x66726163u, h.cols, d, e, c});
            const std::uint64_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
            for (std::uint64_t s = lo; s < hi; ++s) {
                const Vec err = random_weight_error(f, h.cols, e, rng);
                ++per_chunk[c][counter.count_others(err)];
            }
        }
    };
    if (jobs <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& m : per_chunk)
        for (auto [k, c] : m) table.counts[k] += c;
    return table;
}

}  // namespace qrsmem
