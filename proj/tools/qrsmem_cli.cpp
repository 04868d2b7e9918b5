#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qrsmem/basis.hpp"
#include "qrsmem/config.hpp"
#include "qrsmem/errors.hpp"
#include "qrsmem/faultsweep.hpp"
#include "qrsmem/fraction_cache.hpp"
#include "qrsmem/frontier.hpp"
#include "qrsmem/grs.hpp"
#include "qrsmem/io.hpp"
#include "qrsmem/qrs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qrsmem;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfig = 2;
constexpr int kResource = 3;

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Run record written next to the outputs of commands that produce files.
class Manifest {
public:
    Manifest(std::string command, const std::vector<std::string>& argv) : start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["argv"] = argv;
        doc_["version"] = QRSMEM_VERSION;
        doc_["configs"] = json::array();
        doc_["outputs"] = json::array();
        doc_["seeds"] = json::object();
    }
    void config(const fs::path& p) { doc_["configs"].push_back({{"path", p.string()}, {"crc32", file_crc32_hex(p)}}); }
    void seed(const std::string& name, std::uint64_t v) { doc_["seeds"][name] = v; }
    json& operator[](const std::string& key) { return doc_[key]; }
    void output(const fs::path& p, const std::string& content) {
        write_file_atomic(p, content);
        doc_["outputs"].push_back({{"path", p.string()}, {"crc32", file_crc32_hex(p)}});
    }
    void write(const fs::path& p) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        doc_["wall_time_s"] = secs;
        write_file_atomic(p, doc_.dump(2) + "\n");
    }

private:
    json doc_;
    std::chrono::steady_clock::time_point start_;
};

// binarize

struct BinarizeArgs {
    std::string code, basis, out, check;
};

int cmd_binarize(const BinarizeArgs& a) {
    const QuditBasis basis = QuditBasis::load(a.basis);
    const FieldPtr ctx = basis.field_ptr();
    const CodeSpec spec = load_code_spec(*ctx, a.code);
    const QrsCode code = build_qrs(ctx, spec.alpha.size(), spec.d, spec.alpha, spec.v);
    if (!is_zero(multiply(*ctx, code.hx, transpose(code.hz)))) {
        std::cerr << "hx hz^T is nonzero\n";
        return kViolation;
    }
    const BinarizedCss bin = binarize(code, MappingSet::uniform(basis, code.n));
    for (const auto& x : bin.x_rows)
        for (const auto& z : bin.z_rows) {
            std::uint8_t acc = 0;
            for (std::size_t i = 0; i < x.size(); ++i) acc ^= static_cast<std::uint8_t>(x[i] & z[i]);
            if (acc) {
                std::cerr << "binarized X and Z rows are not orthogonal\n";
                return kViolation;
            }
        }
    const std::string xs = format_listing(bin.x_rows, basis.size());
    const std::string zs = format_listing(bin.z_rows, basis.size());
    if (!a.out.empty()) {
        write_file_atomic(a.out + "_x_rows.txt", xs);
        write_file_atomic(a.out + "_z_rows.txt", zs);
    } else if (a.check.empty()) {
        std::cout << "X rows\n" << xs << "Z rows\n" << zs;
    }
    if (!a.check.empty()) {
        const bool x_ok = read_text_file(a.check + "_x_rows.txt") == xs;
        const bool z_ok = read_text_file(a.check + "_z_rows.txt") == zs;
        std::cout << "x rows: " << (x_ok ? "match" : "MISMATCH") << "\n"
                  << "z rows: " << (z_ok ? "match" : "MISMATCH") << "\n";
        if (!x_ok || !z_ok) return kViolation;
    }
    return kOk;
}

// fractions

struct FractionArgs {
    std::size_t n = 20, d = 4, e = 2;
    std::uint64_t samples = 10000, seed = 1;
    std::string alpha_dir = QRSMEM_DATA_DIR "/alpha";
    std::string out;
    std::string cache;
    bool all = false;
    unsigned jobs = default_jobs();
};

int cmd_fractions(const FractionArgs& a, const std::vector<std::string>& argv) {
    const FieldPtr ctx = FieldCtx::gf2048();
    if (a.all) {
        // Fill a cache directory with every table the failure model needs.
        if (a.cache.empty()) throw ConfigError("--all needs --cache");
        const FractionCache cache(a.cache, a.alpha_dir);
        for (const auto& [d, e] : model_fraction_keys()) {
            if (2 * (d - 1) >= a.n) continue;
            const FractionTable t = cache.ensure(ctx, a.n, d, e, a.samples, a.seed, a.jobs);
            std::cout << "n=" << a.n << " d=" << d << " e=" << e << " total=" << format_double(t.total())
                      << " stderr=" << format_double(t.total_stderr()) << " samples=" << t.samples << "\n";
        }
        return kOk;
    }
    FractionTable t;
    if (!a.cache.empty()) {
        t = FractionCache(a.cache, a.alpha_dir).ensure(ctx, a.n, a.d, a.e, a.samples, a.seed, a.jobs);
    } else {
        const fs::path alpha_file = fs::path(a.alpha_dir) / ("alpha_" + std::to_string(a.n) + ".txt");
        const Vec alpha = load_alpha(*ctx, alpha_file.string());
        if (alpha.size() != a.n) throw ConfigError("alpha file length differs from --n");
        const Matrix h = fraction_check_matrix(ctx, alpha, a.d);
        t = estimate_fraction_table(*ctx, h, a.d, a.e, a.samples, a.seed, a.jobs);
    }
    const std::string csv = t.to_csv();
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        Manifest m("fractions", argv);
        m.seed("root", a.seed);
        m.output(a.out, csv);
        m["total"] = t.total();
        m["total_stderr"] = t.total_stderr();
        m.write(a.out + ".manifest.json");
    }
    return kOk;
}

// frontier

struct FrontierArgs {
    std::string noise, grid, out = "frontier_out", baseline;
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 1;
    unsigned jobs = default_jobs();
};

std::string skipped_csv(const std::vector<SkippedPoint>& s) {
    std::ostringstream out;
    out << "n,m,d,M,R,reason\n";
    for (const auto& p : s)
        out << p.params.n << ',' << p.params.m << ',' << p.params.d << ',' << p.params.M << ',' << p.params.R << ','
            << p.reason << '\n';
    return out.str();
}

int cmd_frontier(const FrontierArgs& a, const std::vector<std::string>& argv) {
    Manifest m("frontier", argv);
    const NoiseConfig noise = load_noise_config(a.noise);
    const GridConfig grid = load_grid_config(a.grid);
    m.config(a.noise);
    m.config(a.grid);
    std::optional<std::vector<CurvePoint>> baseline;
    if (!a.baseline.empty()) {
        baseline = parse_curve_csv(read_text_file(a.baseline));
        m.config(a.baseline);
    }

    const auto points = grid_points(grid);
    std::set<std::size_t> ns;
    for (const auto& p : points) ns.insert(p.n);
    const FractionCache cache(grid.fractions_dir, grid.alpha_dir);
    if (a.samples) {
        // Resumable: existing tables are reused, missing ones are estimated.
        m.seed("fractions", a.seed);
        m["fraction_samples"] = *a.samples;
        const FieldPtr ctx = FieldCtx::gf2048();
        for (std::size_t n : ns)
            for (const auto& [d, e] : model_fraction_keys())
                if (2 * (d - 1) < n && d >= grid.d_min && d <= grid.d_max)
                    cache.ensure(ctx, n, d, e, *a.samples, a.seed, a.jobs);
    }
    const FractionSource fractions = cache.source({ns.begin(), ns.end()}, grid.allow_fallback);
    m["fraction_fallback"] = grid.allow_fallback;

    const SweepResult r = sweep(noise, grid, points, fractions, a.jobs);
    const auto front = pareto(r.points);
    const fs::path out(a.out);
    m.output(out / "frontier.csv", frontier_csv(r.points));
    m.output(out / "pareto.csv", frontier_csv(front));
    m.output(out / "skipped.csv", skipped_csv(r.skipped));
    m["evaluated"] = r.points.size();
    m["skipped"] = r.skipped.size();
    m["pareto"] = front.size();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : r.points) best = std::min(best, p.ler_per_lqr);
    if (!r.points.empty()) m["best_ler_per_lqr"] = best;
    if (baseline) {
        if (front.empty()) throw NoBaseline("no evaluated points to compare with the baseline");
        const auto x = crossover(to_curve(front), *baseline);
        m["crossover_ler"] = x ? json(*x) : json(nullptr);
    }
    m.write(out / "manifest.json");
    std::cout << "evaluated " << r.points.size() << ", skipped " << r.skipped.size() << ", pareto " << front.size()
              << "\n";
    if (!r.points.empty()) std::cout << "best ler_per_lqr " << format_double(best) << "\n";
    return kOk;
}

// faultsweep

struct FaultSweepArgs {
    std::size_t n = 4, rounds = 1, faults = 1;
    int s = 3;
    std::uint64_t seed = 1;
    std::string gammas, out;
    bool no_odd_checks = false;
    unsigned jobs = default_jobs();
};

int cmd_faultsweep(const FaultSweepArgs& a) {
    if (a.s < 2 || a.s > 11) throw BadParameters("--q-bits must lie in 2..11");
    const FieldPtr ctx = FieldCtx::make(a.s, FieldCtx::default_poly(a.s));
    Vec gammas;
    if (!a.gammas.empty()) {
        std::istringstream in(a.gammas);
        std::string tok;
        while (std::getline(in, tok, ',')) gammas.push_back(ctx->parse(tok));
        if (gammas.size() != a.n) throw BadParameters("--gammas needs n entries");
    } else {
        Rng rng = derive_rng(a.seed, {0});
        gammas = random_nonzero(*ctx, a.n, rng);
    }
    const CatPrepOptions prep{a.rounds, !a.no_odd_checks};
    std::cout << "gammas";
    for (Elem g : gammas) std::cout << ' ' << g;
    std::cout << "\n";
    if (a.faults == 0) {
        const Script s = cat_preparation_script(ctx, gammas, prep);
        Rng rng = derive_rng(a.seed, {1});
        const Transcript t = run_script(s, Tableau(ctx, s.n_qudits), {}, &rng);
        std::vector<std::size_t> cat(a.n);
        for (std::size_t i = 0; i < a.n; ++i) cat[i] = i;
        const CatResidual res = cat_residual(*t.state, gammas, cat);
        std::cout << "accepted " << (t.accepted ? "yes" : "no") << ", residual x weight " << res.x_weight
                  << ", z weight " << res.z_weight << "\n";
        return t.accepted && res.x_weight == 0 && res.z_weight == 0 ? kOk : kViolation;
    }
    if (a.faults > 2) throw BadParameters("--faults must be 0, 1 or 2");
    const SweepReport rep = sweep_cat_preparation(ctx, gammas, prep, {a.faults, a.jobs});
    std::cout << "locations " << rep.locations << "\nconfigurations " << rep.configurations << "\naccepted "
              << rep.accepted << "\nmax accepted x weight " << rep.max_accepted_x_weight << "\nviolations "
              << rep.violations << "\n";
    if (rep.violations == 0) return kOk;
    const Script s = cat_preparation_script(ctx, gammas, prep);
    Rng rng = derive_rng(a.seed, {2});
    const Transcript t = run_script(s, Tableau(ctx, s.n_qudits), rep.counterexample, &rng);
    const std::string jsonl = transcript_jsonl(s, t, rep.counterexample);
    if (a.out.empty()) std::cerr << jsonl;
    else write_file_atomic(a.out, jsonl);
    std::cout << "counterexample x weight " << rep.counterexample_weight << "\n";
    return kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Reed-Solomon memory toolkit"};
    app.require_subcommand(1);
    const std::vector<std::string> args(argv, argv + argc);

    BinarizeArgs ba;
    auto* bin = app.add_subcommand("binarize", "Binary CSS rows of a code over GF(2^s)");
    bin->add_option("--code", ba.code, "code spec file (d, alpha, optional v)")->required();
    bin->add_option("--basis", ba.basis, "basis file")->required();
    bin->add_option("--out", ba.out, "output prefix for <prefix>_x_rows.txt and <prefix>_z_rows.txt");
    bin->add_option("--check", ba.check, "golden prefix to compare against");

    FractionArgs fa;
    auto* fr = app.add_subcommand("fractions", "Monte Carlo collision-fraction table");
    fr->add_option("--n", fa.n, "code length");
    fr->add_option("--d", fa.d, "distance");
    fr->add_option("--e", fa.e, "error weight");
    fr->add_option("--samples", fa.samples, "number of sampled errors");
    fr->add_option("--seed", fa.seed, "root seed");
    fr->add_option("--alpha-dir", fa.alpha_dir, "directory with alpha_<n>.txt");
    fr->add_option("--cache", fa.cache, "fraction cache directory");
    fr->add_flag("--all", fa.all, "fill the cache with every table the failure model uses at this n");
    fr->add_option("--out", fa.out, "CSV output path (stdout if absent)");
    fr->add_option("--jobs", fa.jobs, "worker threads");

    FrontierArgs fo;
    std::uint64_t frontier_samples = 0;
    auto* ft = app.add_subcommand("frontier", "Sweep memory parameters and extract the Pareto frontier");
    ft->add_option("--config", fo.noise, "noise INI")->required();
    ft->add_option("--grid", fo.grid, "grid INI")->required();
    ft->add_option("--out", fo.out, "output directory");
    ft->add_option("--baseline", fo.baseline, "baseline curve CSV (ler,overhead)");
    auto* samples_opt = ft->add_option("--samples", frontier_samples, "estimate missing fraction tables");
    ft->add_option("--seed", fo.seed, "root seed for fraction estimation");
    ft->add_option("--jobs", fo.jobs, "worker threads");

    FaultSweepArgs fs_args;
    auto* fw = app.add_subcommand("faultsweep", "Exhaustive fault injection into cat preparation");
    fw->add_option("--n", fs_args.n, "cat size");
    fw->add_option("--rounds", fs_args.rounds, "verification rounds");
    fw->add_option("--q-bits", fs_args.s, "field exponent s, q = 2^s");
    fw->add_option("--faults", fs_args.faults, "faults per configuration (0, 1 or 2)");
    fw->add_option("--seed", fs_args.seed, "root seed");
    fw->add_option("--gammas", fs_args.gammas, "comma-separated cat coefficients");
    fw->add_option("--out", fs_args.out, "counterexample transcript path (stderr if absent)");
    fw->add_flag("--no-odd-checks", fs_args.no_odd_checks, "ignore second-layer outcomes");
    fw->add_option("--jobs", fs_args.jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*bin) return cmd_binarize(ba);
        if (*fr) return cmd_fractions(fa, args);
        if (*ft) {
            if (*samples_opt) fo.samples = frontier_samples;
            return cmd_frontier(fo, args);
        }
        if (*fw) return cmd_faultsweep(fs_args);
    } catch (const TooLarge& e) {
        std::cerr << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kConfig;
    }
    return kOk;
}
