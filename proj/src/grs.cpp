#include "qrsmem/grs.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qrsmem/errors.hpp"

namespace qrsmem {

GrsCode::GrsCode(FieldPtr ctx, std::size_t k, Vec alpha, Vec mult)
    : ctx_(std::move(ctx)), k_(k), alpha_(std::move(alpha)), mult_(std::move(mult)) {
    const std::size_t n = alpha_.size();
    if (mult_.size() != n) throw BadParameters("alpha and multiplier lengths differ");
    if (k_ == 0 || k_ > n || n > ctx_->q()) throw BadParameters("need 0 < k <= n <= q");
    std::set<Elem> seen;
    for (auto a : alpha_) {
        if (a == 0) throw BadParameters("evaluation points must be nonzero");
        if (!seen.insert(a).second) throw BadParameters("evaluation points must be distinct");
    }
    for (auto v : mult_)
        if (v == 0) throw BadParameters("column multipliers must be nonzero");
}

Matrix GrsCode::generator_matrix() const {
    Matrix g(k_, n());
    for (std::size_t j = 0; j < n(); ++j) {
        Elem p = mult_[j];
        for (std::size_t i = 0; i < k_; ++i) {
            g(i, j) = p;
            p = ctx_->mul(p, alpha_[j]);
        }
    }
    return g;
}

Vec GrsCode::dual_multipliers() const {
    Vec u(n());
    for (std::size_t i = 0; i < n(); ++i) {
        Elem p = mult_[i];
        for (std::size_t j = 0; j < n(); ++j)
            if (j != i) p = ctx_->mul(p, alpha_[i] ^ alpha_[j]);
        u[i] = ctx_->inv(p);
    }
    return u;
}

GrsCode GrsCode::dual() const {
    if (k_ == n()) throw BadParameters("dual of the full space is trivial");
    return GrsCode(ctx_, n() - k_, alpha_, dual_multipliers());
}

Vec syndrome(const FieldCtx& f, const Matrix& h, const Vec& e) {
    if (h.cols != e.size()) throw DimensionMismatch("syndrome: error length " + std::to_string(e.size()) +
                                                    " vs " + std::to_string(h.cols) + " columns");
    return mat_vec(f, h, e);
}

std::size_t min_distance_bruteforce(const GrsCode& c) {
    const auto& f = c.field();
    const double work = std::pow(static_cast<double>(f.q()), static_cast<double>(c.k())) * static_cast<double>(c.n());
    if (work > 1e8) throw TooLarge("q^k * n exceeds 1e8");
    const Matrix g = c.generator_matrix();
    std::vector<std::uint32_t> msg(c.k(), 0);
    std::size_t best = c.n() + 1;
    Vec word(c.n());
    while (true) {
        std::size_t i = 0;
        while (i < c.k() && ++msg[i] == f.q()) msg[i++] = 0;
        if (i == c.k()) break;
        std::fill(word.begin(), word.end(), Elem{0});
        for (std::size_t r = 0; r < c.k(); ++r)
            if (msg[r])
                for (std::size_t j = 0; j < c.n(); ++j) word[j] ^= f.mul(static_cast<Elem>(msg[r]), g(r, j));
        best = std::min(best, weight(word));
    }
    return best;
}

BigInt binomial(long long a, long long b) {
    if (a < 0 || b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    BigInt r = 1;
    for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

BigInt mds_weight_count(std::size_t n, std::size_t d, std::size_t w, std::uint64_t q) {
    if (w == 0) return 1;
    if (w < d || w > n) return 0;
    BigInt sum = 0;
    for (std::size_t j = 0; j + d <= w; ++j) {
        BigInt term = binomial(static_cast<long long>(w), static_cast<long long>(j)) *
                      (boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(w - d + 1 - j)) - 1);
        if (j % 2) sum -= term;
        else sum += term;
    }
    return binomial(static_cast<long long>(n), static_cast<long long>(w)) * sum;
}

Vec random_alpha(const FieldCtx& f, std::size_t n, Rng& rng) {
    if (n > f.q() - 1) throw BadParameters("more evaluation points than nonzero field elements");
    std::vector<Elem> pool;
    for (std::uint32_t a = 1; a < f.q(); ++a) pool.push_back(static_cast<Elem>(a));
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
    return Vec(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
}

Vec random_nonzero(const FieldCtx& f, std::size_t n, Rng& rng) {
    Vec v(n);
    for (auto& x : v) x = static_cast<Elem>(1 + uniform_below(rng, f.q() - 1));
    return v;
}

Vec parse_alpha(const FieldCtx& f, const std::string& text) {
    std::istringstream in(text);
    std::string header;
    in >> header;
    std::size_t n = 0;
    if (header.rfind("n=", 0) != 0) throw ParseError("alpha file must start with n=<int>");
    try {
        n = std::stoul(header.substr(2));
    } catch (const std::exception&) {
        throw ParseError("bad alpha header " + header);
    }
    Vec a;
    std::string tok;
    while (in >> tok) a.push_back(f.parse(tok));
    if (a.size() != n) throw ParseError("alpha file declares n=" + std::to_string(n) + " but lists " + std::to_string(a.size()));
    return a;
}

Vec load_alpha(const FieldCtx& f, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open alpha file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_alpha(f, ss.str());
}

}  // namespace qrsmem
