#include "qrsmem/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "qrsmem/errors.hpp"
#include "qrsmem/io.hpp"

namespace qrsmem {

QubitCounts qubit_counts(std::size_t n, std::size_t m, std::size_t d) {
    const double N = static_cast<double>(n), Mr = static_cast<double>(m);
    QubitCounts c;
    c.physical = 378.0 * N * Mr + 44.0 * (N - 1) * (Mr - 1) + 22.0 * (N - 1) + 22.0 * (Mr - 1);
    c.logical = 11.0 * (Mr - 2) * (N - 2.0 * static_cast<double>(d - 1));
    c.overhead = c.logical > 0 ? c.physical / c.logical : std::numeric_limits<double>::infinity();
    return c;
}

std::vector<MemoryParams> grid_points(const GridConfig& g) {
    std::vector<MemoryParams> out;
    for (std::size_t n = g.n_min; n <= g.n_max; ++n)
        for (std::size_t m = g.m_min; m <= g.m_max; ++m)
            for (std::size_t d = g.d_min; d <= g.d_max; ++d)
                for (std::size_t M : g.extra_checks)
                    for (std::size_t R : g.rounds) {
                        if (M < 1 || M + 2 > d || 2 * (d - 1) >= n) continue;
                        out.push_back({n, m, d, M, R, 2048});
                    }
    return out;
}

namespace {

FrontierPoint evaluate(const MemoryParams& p, const InstructionRates& rates, const PostSelection& ps,
                       const FractionSource& fractions) {
    FrontierPoint fp;
    fp.params = p;
    fp.rates = rates;
    fp.ps = ps;
    fp.qubits = qubit_counts(p.n, p.m, p.d);
    fp.breakdown = total_failure(p, rates, ps, fractions);
    fp.ler_per_lqr = fp.breakdown.ler_per_lqr;
    return fp;
}

double* coordinate(PostSelection& ps, int k) {
    ClassRates* c = k / 3 == 0 ? &ps.c1 : k / 3 == 1 ? &ps.c2 : &ps.c3;
    return k % 3 == 0 ? &c->half : k % 3 == 1 ? &c->whole : &c->inter;
}

bool has_curves(const PostSelection& ps) {
    return !ps.half.points.empty() || !ps.whole.points.empty() || !ps.inter.points.empty();
}

}  // namespace

FrontierPoint optimize_post_selection(const MemoryParams& p, const NoiseConfig& noise,
                                      const std::vector<double>& rate_grid, const FractionSource& fractions) {
    PostSelection best_ps = noise.ps;
    FrontierPoint best = evaluate(p, noise.rates, best_ps, fractions);
    for (int pass = 0; pass < 4; ++pass) {
        bool improved = false;
        for (int k = 0; k < 9; ++k) {
            for (double r : rate_grid) {
                PostSelection trial = best_ps;
                *coordinate(trial, k) = r;
                try {
                    FrontierPoint fp = evaluate(p, noise.rates, trial, fractions);
                    if (fp.ler_per_lqr < best.ler_per_lqr) {
                        best = std::move(fp);
                        best_ps = trial;
                        improved = true;
                    }
                } catch (const DivergentRetry&) {
                } catch (const DegenerateP&) {
                }
            }
        }
        if (!improved) break;
    }
    return best;
}

SweepResult sweep(const NoiseConfig& noise, const GridConfig& grid, const std::vector<MemoryParams>& points,
                  const FractionSource& fractions, unsigned jobs) {
    const bool search = grid.search_post_selection && has_curves(noise.ps);
    std::vector<std::optional<FrontierPoint>> done(points.size());
    std::vector<std::string> reason(points.size());
    std::vector<std::exception_ptr> failure(std::max(1u, jobs));
    auto work = [&](unsigned w, unsigned stride) {
        try {
            for (std::size_t i = w; i < points.size(); i += stride) {
                const MemoryParams& p = points[i];
                if (qubit_counts(p.n, p.m, p.d).physical > grid.max_physical_qubits) {
                    reason[i] = "exceeds qubit cap";
                    continue;
                }
                try {
                    done[i] = search ? optimize_post_selection(p, noise, grid.search_rates, fractions)
                                     : evaluate(p, noise.rates, noise.ps, fractions);
                } catch (const DivergentRetry&) {
                    reason[i] = "divergent retry";
                } catch (const DegenerateP&) {
                    reason[i] = "degenerate success probability";
                }
            }
        } catch (...) {
            failure[w] = std::current_exception();
        }
    };
    const unsigned stride = std::max(1u, jobs);
    if (stride == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < stride; ++w) pool.emplace_back(work, w, stride);
        for (auto& t : pool) t.join();
    }
    for (auto& e : failure)
        if (e) std::rethrow_exception(e);
    SweepResult out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (done[i]) out.points.push_back(std::move(*done[i]));
        else out.skipped.push_back({points[i], reason[i]});
    }
    return out;
}

std::vector<FrontierPoint> pareto(std::vector<FrontierPoint> points) {
    std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        if (a.ler_per_lqr != b.ler_per_lqr) return a.ler_per_lqr < b.ler_per_lqr;
        return a.qubits.overhead < b.qubits.overhead;
    });
    std::vector<FrontierPoint> out;
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : points) {
        if (p.qubits.overhead < best) {
            best = p.qubits.overhead;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<CurvePoint> to_curve(const std::vector<FrontierPoint>& frontier) {
    std::vector<CurvePoint> c;
    for (const auto& p : frontier) c.push_back({p.ler_per_lqr, p.qubits.overhead});
    return c;
}

std::vector<CurvePoint> parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<CurvePoint> out;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            if (line != "ler,overhead") throw ParseError("baseline header must be ler,overhead");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("baseline row needs two columns: " + line);
        try {
            std::size_t u1 = 0, u2 = 0;
            const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
            const double ler = std::stod(a, &u1), ov = std::stod(b, &u2);
            if (u1 != a.size() || u2 != b.size()) throw ParseError("bad number in baseline row: " + line);
            if (!(ler > 0) || !(ov > 0)) throw ParseError("baseline values must be positive: " + line);
            out.push_back({ler, ov});
        } catch (const std::logic_error&) {
            throw ParseError("bad number in baseline row: " + line);
        }
    }
    return out;
}

namespace {

// Piecewise-linear interpolation of log overhead against log ler.
double log_overhead_at(const std::vector<CurvePoint>& c, double log_ler) {
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double x0 = std::log(c[i - 1].ler), x1 = std::log(c[i].ler);
        if (log_ler <= x1 || i + 1 == c.size()) {
            const double y0 = std::log(c[i - 1].overhead), y1 = std::log(c[i].overhead);
            if (x1 == x0) return y1;
            return y0 + (y1 - y0) * (log_ler - x0) / (x1 - x0);
        }
    }
    return std::log(c.front().overhead);
}

std::vector<CurvePoint> sorted_by_ler(std::vector<CurvePoint> c) {
    std::sort(c.begin(), c.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.ler < b.ler; });
    return c;
}

}  // namespace

std::optional<double> crossover(const std::vector<CurvePoint>& a_in, const std::vector<CurvePoint>& b_in) {
    if (a_in.empty() || b_in.empty()) throw NoBaseline("crossover needs two nonempty curves");
    const auto a = sorted_by_ler(a_in), b = sorted_by_ler(b_in);
    const double lo = std::log(std::max(a.front().ler, b.front().ler));
    const double hi = std::log(std::min(a.back().ler, b.back().ler));
    if (lo > hi) return std::nullopt;
    std::vector<double> xs{lo, hi};
    for (const auto* c : {&a, &b})
        for (const auto& p : *c) {
            const double x = std::log(p.ler);
            if (x > lo && x < hi) xs.push_back(x);
        }
    std::sort(xs.begin(), xs.end(), std::greater<>());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    auto diff = [&](double x) { return log_overhead_at(a, x) - log_overhead_at(b, x); };
    double prev_x = xs[0], prev_d = diff(xs[0]);
    if (prev_d >= 0) return std::exp(prev_x);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = diff(xs[i]);
        if (d >= 0) {
            const double x = prev_x + (xs[i] - prev_x) * (-prev_d) / (d - prev_d);
            return std::exp(x);
        }
        prev_x = xs[i];
        prev_d = d;
    }
    return std::nullopt;
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
    std::ostringstream out;
    out << "n,m,d,M,R,p_half,p_whole,p_inter,p_idle,ps_c1_half,ps_c1_whole,ps_c1_inter,ps_c2_half,ps_c2_whole,"
           "ps_c2_inter,ps_c3_half,ps_c3_whole,ps_c3_inter,physical,logical,overhead,ler_per_lqr,tlf1,tlf2,tlf3,"
           "slf,cat_burst\n";
    for (const auto& p : points) {
        const auto& b = p.breakdown;
        out << p.params.n << ',' << p.params.m << ',' << p.params.d << ',' << p.params.M << ',' << p.params.R;
        const std::vector<double> vals{p.rates.p_half, p.rates.p_whole, p.rates.p_inter, p.rates.p_idle,
                                       p.ps.c1.half, p.ps.c1.whole, p.ps.c1.inter,
                                       p.ps.c2.half, p.ps.c2.whole, p.ps.c2.inter,
                                       p.ps.c3.half, p.ps.c3.whole, p.ps.c3.inter,
                                       p.qubits.physical, p.qubits.logical, p.qubits.overhead, p.ler_per_lqr,
                                       b.tlf1, b.tlf2, b.tlf3, b.slf, b.cat_burst};
        for (double v : vals) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

}  // namespace qrsmem
