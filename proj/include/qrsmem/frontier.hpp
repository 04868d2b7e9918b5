#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrsmem/config.hpp"
#include "qrsmem/failure.hpp"

namespace qrsmem {

struct QubitCounts {
    double physical = 0;
    double logical = 0;
    double overhead = 0;
};

// Physical and logical qubit counts of an n-column, m-row memory.
QubitCounts qubit_counts(std::size_t n, std::size_t m, std::size_t d);

struct FrontierPoint {
    MemoryParams params;
    InstructionRates rates;
    PostSelection ps;
    QubitCounts qubits;
    double ler_per_lqr = 0;
    FailureBreakdown breakdown;
};

struct SkippedPoint {
    MemoryParams params;
    std::string reason;
};

struct SweepResult {
    std::vector<FrontierPoint> points;
    std::vector<SkippedPoint> skipped;
};

// Grid points in a fixed order (n, m, d, M, R), filtered by the parameter
// constraints and the qubit cap.
std::vector<MemoryParams> grid_points(const GridConfig& grid);

// Evaluates every grid point. With search enabled and reduction curves
// present, post-selection rates are chosen by coordinate descent over the
// configured rate grid. Output order is independent of jobs.
SweepResult sweep(const NoiseConfig& noise, const GridConfig& grid, const std::vector<MemoryParams>& points,
                  const FractionSource& fractions, unsigned jobs);

// Post-selection rates minimizing the logical error rate at one point.
FrontierPoint optimize_post_selection(const MemoryParams& p, const NoiseConfig& noise,
                                      const std::vector<double>& rate_grid, const FractionSource& fractions);

// Nondominated points (no other point has both lower-or-equal overhead and
// ler), sorted by increasing ler; overhead decreases along the result.
std::vector<FrontierPoint> pareto(std::vector<FrontierPoint> points);

struct CurvePoint {
    double ler = 0;
    double overhead = 0;
};

std::vector<CurvePoint> to_curve(const std::vector<FrontierPoint>& frontier);
// Baseline CSV with header "ler,overhead". Throws ParseError.
std::vector<CurvePoint> parse_curve_csv(const std::string& text);

// Scanning from the loosest shared ler toward stricter ones, the ler at which
// curve a's overhead first reaches curve b's, interpolated linearly in log-log
// space. None if the ler ranges do not overlap or a stays below b. Throws
// NoBaseline if either curve is empty.
std::optional<double> crossover(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b);

std::string frontier_csv(const std::vector<FrontierPoint>& points);

}  // namespace qrsmem
