#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrsmem/linalg.hpp"
#include "qrsmem/rng.hpp"

namespace qrsmem {

struct DecodeResult {
    std::vector<Vec> corrections;  // all minimum-weight errors matching the syndrome
    Vec chosen;                    // uniform pick among corrections
    std::size_t weight = 0;
    std::uint64_t seed = 0;
};

// Support enumeration in increasing weight with a linear solve per support.
// Throws NoSolutionWithinBound or TooLarge (more than 1e7 supports).
DecodeResult decode_min_weight(const FieldCtx& f, const Matrix& h, const Vec& y, std::size_t w_max,
                               std::uint64_t seed);

// Exhaustive oracle: scans every vector of GF(q)^n (q^n <= 1e7) for the
// minimum-weight members of the syndrome coset.
std::vector<Vec> coset_min_weight_bruteforce(const FieldCtx& f, const Matrix& h, const Vec& y);

// Closed-form bounds for the covered (d, e) pairs; throws Uncovered otherwise.
double analytic_uncorrectable_fraction(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q);

// Exact expected number of other weight-e errors sharing the syndrome of a
// uniformly random weight-e error, from the MDS weight enumerator.
double expected_same_weight_collisions(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q);

struct FractionTable {
    std::size_t n = 0, d = 0, e = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::map<std::size_t, std::uint64_t> counts;  // k -> samples with exactly k other colliding errors

    double fraction(std::size_t k) const;
    double stderr_of(std::size_t k) const;
    // Sum over k >= 1 of F_k, with its binomial standard error.
    double total() const;
    double total_stderr() const;
    // Sum over k >= 1 of k/(k+1) * F_k.
    double weighted_mass() const;

    std::string to_csv(bool header = true) const;
    static std::vector<FractionTable> from_csv(const std::string& text);
};

// Counts, for weight-e errors, how many distinct other weight-e errors share
// the syndrome under h.
class CollisionCounter {
public:
    CollisionCounter(const FieldCtx& f, const Matrix& h);
    std::size_t count_others(const Vec& err) const;

private:
    const FieldCtx& f_;
    Matrix h_;
};

// Throws TooLarge if e >= number of rows or the per-sample enumeration is huge.
FractionTable estimate_fraction_table(const FieldCtx& f, const Matrix& h, std::size_t d, std::size_t e,
                                      std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

// Uniform weight-e error: uniform support, uniform nonzero values.
Vec random_weight_error(const FieldCtx& f, std::size_t n, std::size_t e, Rng& rng);

}  // namespace qrsmem
