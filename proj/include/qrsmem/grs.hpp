#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrsmem/gf.hpp"
#include "qrsmem/linalg.hpp"
#include "qrsmem/rng.hpp"

namespace qrsmem {

using BigInt = boost::multiprecision::cpp_int;

// Generalized Reed-Solomon code: row i of the generator is mult_j * alpha_j^i.
class GrsCode {
public:
    // Throws BadParameters on repeated/zero points, zero multipliers or bad k.
    GrsCode(FieldPtr ctx, std::size_t k, Vec alpha, Vec mult);

    const FieldCtx& field() const { return *ctx_; }
    const FieldPtr& field_ptr() const { return ctx_; }
    std::size_t n() const { return alpha_.size(); }
    std::size_t k() const { return k_; }
    const Vec& alpha() const { return alpha_; }
    const Vec& mult() const { return mult_; }

    Matrix generator_matrix() const;
    // Multipliers u with u_i^{-1} = v_i * prod_{j != i}(alpha_i - alpha_j).
    Vec dual_multipliers() const;
    GrsCode dual() const;

private:
    FieldPtr ctx_;
    std::size_t k_;
    Vec alpha_;
    Vec mult_;
};

Vec syndrome(const FieldCtx& f, const Matrix& h, const Vec& e);

// Exact minimum weight by enumerating all q^k codewords.
std::size_t min_distance_bruteforce(const GrsCode& c);

// Number of weight-w codewords of an [n, *, d] MDS code over GF(q).
BigInt mds_weight_count(std::size_t n, std::size_t d, std::size_t w, std::uint64_t q);

BigInt binomial(long long a, long long b);

// Distinct nonzero evaluation points chosen uniformly.
Vec random_alpha(const FieldCtx& f, std::size_t n, Rng& rng);
Vec random_nonzero(const FieldCtx& f, std::size_t n, Rng& rng);

// "n=<int>" header followed by n decimal elements.
Vec load_alpha(const FieldCtx& f, const std::string& path);
Vec parse_alpha(const FieldCtx& f, const std::string& text);

}  // namespace qrsmem
