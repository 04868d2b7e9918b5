#include "qrsmem/gf.hpp"

#include <charconv>
#include <cassert>

#include "qrsmem/errors.hpp"

namespace qrsmem {

namespace {

int degree(std::uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    const int dm = degree(m);
    for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
    return a;
}

}  // namespace

bool is_irreducible(int s, std::uint32_t poly) {
    if (s < 1 || s > 16 || degree(poly) != s) return false;
    // Trial division by every polynomial of degree 1..s/2.
    for (int dg = 1; 2 * dg <= s; ++dg) {
        for (std::uint64_t f = 1ull << dg; f < (2ull << dg); ++f) {
            if (poly_mod(poly, f) == 0) return false;
        }
    }
    return true;
}

FieldCtx::FieldCtx(int s, std::uint32_t poly) : s_(s), poly_(poly), q_(1u << s) {
    if (!is_irreducible(s, poly)) {
        throw ReducibleModulus("polynomial " + std::to_string(poly) + " is not irreducible of degree " +
                               std::to_string(s));
    }
    const std::uint32_t order = q_ - 1;
    // Find a primitive element by checking its cycle length.
    for (std::uint32_t g = 2; g < q_ || order == 1; ++g) {
        Elem cand = order == 1 ? 1 : static_cast<Elem>(g);
        Elem x = 1;
        std::uint32_t len = 0;
        do {
            x = mul_reference(x, cand);
            ++len;
        } while (x != 1);
        if (len == order) {
            gen_ = cand;
            break;
        }
    }
    exp_.assign(2 * order, 0);
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        exp_[i] = x;
        exp_[i + order] = x;
        log_[x] = i;
        x = mul_reference(x, gen_);
    }
    exp32_.assign(exp_.begin(), exp_.end());
    log32_.assign(log_.begin(), log_.end());
    trace_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) trace_[a] = static_cast<std::uint8_t>(trace_reference(static_cast<Elem>(a)));
}

std::shared_ptr<const FieldCtx> FieldCtx::gf2048() {
    static const auto ctx = std::make_shared<const FieldCtx>(11, 0x805u);
    return ctx;
}

std::shared_ptr<const FieldCtx> FieldCtx::make(int s, std::uint32_t poly) {
    if (s == 11 && poly == 0x805u) return gf2048();
    return std::make_shared<const FieldCtx>(s, poly);
}

std::uint32_t FieldCtx::default_poly(int s) {
    if (s == 11) return 0x805u;
    for (std::uint32_t p = (1u << s) | 1u; p < (2u << s); p += 2) {
        if (is_irreducible(s, p)) return p;
    }
    throw ReducibleModulus("no irreducible polynomial of degree " + std::to_string(s));
}

Elem FieldCtx::mul_reference(Elem a, Elem b) const {
    std::uint32_t x = a, r = 0;
    std::uint32_t y = b;
    while (y) {
        if (y & 1u) r ^= x;
        y >>= 1;
        x <<= 1;
        if (x & q_) x ^= poly_;
    }
    return static_cast<Elem>(r);
}

Elem FieldCtx::inv(Elem a) const {
    assert(a < q_);
    if (a == 0) throw DivisionByZero("inverse of zero");
    const std::uint32_t order = q_ - 1;
    return exp_[(order - log_[a]) % order];
}

Elem FieldCtx::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t order = q_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % order)) % order];
}

int FieldCtx::trace_reference(Elem a) const {
    Elem acc = 0, x = a;
    for (int j = 0; j < s_; ++j) {
        acc ^= x;
        x = mul_reference(x, x);
    }
    assert(acc <= 1);
    return acc;
}

Elem FieldCtx::parse(std::string_view text) const {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw MalformedInteger("empty field element");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc::result_out_of_range) throw OutOfRange(std::string(text));
    if (ec != std::errc() || ptr != text.data() + text.size()) throw MalformedInteger(std::string(text));
    if (v >= q_) throw OutOfRange(std::string(text) + " >= " + std::to_string(q_));
    return static_cast<Elem>(v);
}

std::string FieldCtx::render(Elem a) const { return std::to_string(a); }

}  // namespace qrsmem
