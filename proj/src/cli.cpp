#include "wulff/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "wulff/density.hpp"
#include "wulff/errors.hpp"
#include "wulff/film_mc.hpp"
#include "wulff/gibbs.hpp"
#include "wulff/necklace.hpp"
#include "wulff/parallel.hpp"
#include "wulff/seeding.hpp"
#include "wulff/shapes.hpp"
#include "wulff/substrate.hpp"

namespace wulff::cli {
namespace {

using nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double>;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ArgumentError("cannot open output file: " + path);
    return f;
}

void write_json_file(const std::string& path, const ordered_json& doc) {
    auto f = open_output(path);
    f << doc.dump(2) << '\n';
    if (!f) throw ArgumentError("write failed: " + path);
}

// CSV carries the metadata as one leading '#' line.
void write_table(const std::string& path, const std::string& format, const ordered_json& meta,
                 const Table& table) {
    if (format == "json") {
        ordered_json doc = meta;
        doc["columns"] = table.columns;
        ordered_json rows = ordered_json::array();
        for (const auto& row : table.rows) {
            ordered_json r = ordered_json::array();
            for (const auto& c : row) {
                std::visit([&](auto v) { r.push_back(v); }, c);
            }
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        write_json_file(path, doc);
        return;
    }
    auto f = open_output(path);
    f << "# " << meta.dump() << '\n';
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
        f << (k ? "," : "") << table.columns[k];
    }
    f << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) f << ',';
            if (const auto* i = std::get_if<std::int64_t>(&row[k])) {
                f << *i;
            } else {
                f << format_double(std::get<double>(row[k]));
            }
        }
        f << '\n';
    }
    if (!f) throw ArgumentError("write failed: " + path);
}

ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned workers = 0;
};

void add_common(CLI::App* sub, Common& c, bool table_output) {
    sub->add_option("--seed", c.seed, "master seed (64-bit)")->capture_default_str();
    sub->add_option("--out", c.out, "output path")->required();
    sub->add_option("--workers", c.workers, "worker threads (default: $WULFF_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    if (table_output) {
        sub->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    }
}

unsigned workers_of(const Common& c) { return c.workers ? c.workers : default_worker_count(); }

ordered_json metadata(const std::string& subcommand, const Common& c, ordered_json config) {
    config["out"] = c.out;
    config["format"] = c.format;
    ordered_json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["version"] = kVersion;
    meta["subcommand"] = subcommand;
    meta["seed"] = c.seed;
    meta["config"] = std::move(config);
    return meta;
}

struct ShapeFlags {
    std::string shape = "parabola";
    double lambda = 0.1;
    double j2 = 30.0;
    double k2 = 2.0;
    std::size_t nodes = WulffProfile::kDefaultNodes;
};

void add_shape_flags(CLI::App* sub, ShapeFlags& s, bool with_lambda) {
    sub->add_option("--shape", s.shape, "cone | parabola | semicircle | sos-wulff")
        ->check(CLI::IsMember({"cone", "parabola", "semicircle", "sos-wulff", "sos"}))
        ->capture_default_str();
    if (with_lambda) sub->add_option("--lambda", s.lambda, "shape parameter")->capture_default_str();
    sub->add_option("--j2", s.j2, "film coupling (sos-wulff)")->capture_default_str();
    sub->add_option("--k2", s.k2, "film pressure (sos-wulff)")->capture_default_str();
    sub->add_option("--nodes", s.nodes, "profile nodes (sos-wulff)")->capture_default_str();
}

ShapeModel make_shape(const ShapeFlags& s, double lambda) {
    switch (shape_kind_from_string(s.shape)) {
        case ShapeKind::Cone:
            return ShapeModel::cone(lambda);
        case ShapeKind::Parabola:
            return ShapeModel::parabola(lambda);
        case ShapeKind::Semicircle:
            return ShapeModel::semicircle(lambda);
        case ShapeKind::SosWulff:
            return ShapeModel::sos_wulff(s.j2, s.k2, s.nodes);
    }
    throw ArgumentError("unknown shape");
}

void shape_config(ordered_json& config, const ShapeFlags& s, bool with_lambda) {
    const ShapeKind kind = shape_kind_from_string(s.shape);
    config["shape"] = to_string(kind);
    if (kind == ShapeKind::SosWulff) {
        config["j2"] = s.j2;
        config["k2"] = s.k2;
        config["nodes"] = s.nodes;
    } else if (with_lambda) {
        config["lambda"] = s.lambda;
    }
}

struct SubstrateFlags {
    std::size_t n = 1000;
    std::string kind = "exp";
    std::string boundary = "window";
    SosParams sos;
};

void add_substrate_flags(CLI::App* sub, SubstrateFlags& s, std::size_t default_n) {
    s.n = default_n;
    sub->add_option("--n", s.n, "number of sites")->capture_default_str();
    sub->add_option("--substrate", s.kind, "exp (iid Exponential(1)) | sos")
        ->check(CLI::IsMember({"exp", "sos"}))
        ->capture_default_str();
    sub->add_option("--boundary", s.boundary, "window | periodic (sos is always periodic)")
        ->check(CLI::IsMember({"window", "periodic"}))
        ->capture_default_str();
    sub->add_option("--j1", s.sos.j1, "substrate coupling (sos)")->capture_default_str();
    sub->add_option("--k1", s.sos.k1, "substrate pressure (sos)")->capture_default_str();
    sub->add_option("--sweeps", s.sos.sweeps, "sweeps after burn-in (sos)")->capture_default_str();
    sub->add_option("--burn-in", s.sos.burn_in, "burn-in sweeps (sos)")->capture_default_str();
}

Substrate make_substrate(const SubstrateFlags& s, std::uint64_t seed) {
    if (s.kind == "sos") {
        if (s.boundary != "periodic" && s.boundary != "window") throw ArgumentError("bad boundary");
        return gen_sos_substrate(s.n, s.sos, seed);
    }
    return gen_iid_exponential(s.n, seed,
                               s.boundary == "periodic" ? Boundary::Periodic : Boundary::Window);
}

void substrate_config(ordered_json& config, const SubstrateFlags& s) {
    config["n"] = s.n;
    config["substrate"] = s.kind;
    if (s.kind == "sos") {
        config["boundary"] = "periodic";
        config["j1"] = s.sos.j1;
        config["k1"] = s.sos.k1;
        config["sweeps"] = s.sos.sweeps;
        config["burn_in"] = s.sos.burn_in;
    } else {
        config["boundary"] = s.boundary;
    }
}

// --- subcommands -------------------------------------------------------------

ordered_json cmd_gen_substrate(const SubstrateFlags& sf, const Common& c) {
    const Substrate sub = make_substrate(sf, derive_seed(c.seed, 0));
    ordered_json config;
    substrate_config(config, sf);
    Table t{{"i", "h"}, {}};
    double total = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        t.rows.push_back({static_cast<std::int64_t>(i), sub[i]});
        total += sub[i];
    }
    write_table(c.out, c.format, metadata("gen-substrate", c, config), t);
    return {{"n", sub.size()}, {"mean_height", total / static_cast<double>(sub.size())}};
}

ordered_json cmd_wulff_profile(const ShapeFlags& sf, const Common& c) {
    const WulffProfile p = build_sos_wulff_profile(sf.j2, sf.k2, sf.nodes);
    ordered_json config{{"j2", sf.j2}, {"k2", sf.k2}, {"nodes", sf.nodes}};
    Table t{{"x", "w"}, {}};
    for (std::size_t i = 0; i < p.xs().size(); ++i) t.rows.push_back({p.xs()[i], p.ws()[i]});
    write_table(c.out, c.format, metadata("wulff-profile", c, config), t);
    return {{"nodes", p.xs().size()},
            {"support_radius", p.support_radius()},
            {"max_x", p.max_x()},
            {"max_w", p.ws().back()}};
}

ordered_json cmd_necklace(const ShapeFlags& shf, const SubstrateFlags& sf, double step,
                          const Common& c) {
    if (!(step > 0.0)) throw ArgumentError("--step must be positive");
    const ShapeModel shape = make_shape(shf, shf.lambda);
    const Substrate sub = make_substrate(sf, derive_seed(c.seed, 0));
    ordered_json config;
    shape_config(config, shf, true);
    substrate_config(config, sf);
    config["step"] = step;
    const ordered_json meta = metadata("necklace", c, config);

    const bool periodic = sub.boundary() == Boundary::Periodic;
    const double x_end = periodic ? static_cast<double>(sub.size())
                                  : static_cast<double>(sub.size() - 1);
    const auto samples = static_cast<std::size_t>(std::floor(x_end / step + 1e-9)) + 1;

    Table contacts{{"n", "b", "h"}, {}};
    Table envelope{{"x", "I"}, {}};
    std::string method = "necklace";
    std::size_t count = 0;
    try {
        const Necklace neck = contact_set(sub, shape);
        const auto cs = neck.contacts();
        count = cs.size();
        for (std::size_t k = 0; k < cs.size(); ++k) {
            contacts.rows.push_back({static_cast<std::int64_t>(k), cs[k].site, cs[k].height});
        }
        for (std::size_t m = 0; m < samples; ++m) {
            const double x = std::min(x_end, static_cast<double>(m) * step);
            if (periodic && x >= x_end) break;
            envelope.rows.push_back({x, neck.envelope(x)});
        }
    } catch (const UnreachablePair&) {
        // Gaps beyond the support diameter: no contact chain, only the
        // envelope from its definition.
        if (periodic) throw;
        method = "bruteforce";
        const auto env = envelope_bruteforce(sub.with_boundary(Boundary::Window), shape, step);
        for (std::size_t m = 0; m < samples; ++m) {
            const double x = std::min(x_end, static_cast<double>(m) * step);
            envelope.rows.push_back({x, env.value(x)});
        }
    }
    write_table(c.out, c.format, meta, contacts);
    const std::string env_path = c.out + ".envelope." + c.format;
    write_table(env_path, c.format, meta, envelope);
    return {{"method", method},
            {"contacts", count},
            {"density", static_cast<double>(count) / static_cast<double>(sub.size())},
            {"envelope_out", env_path}};
}

ordered_json cmd_density_scan(const ShapeFlags& shf, const std::vector<double>& lambdas,
                              std::size_t n, std::size_t samples, const Common& c) {
    if (c.format != "json") throw ArgumentError("density-scan writes json only");
    ordered_json config;
    shape_config(config, shf, false);
    config["lambda"] = lambdas;
    config["n"] = n;
    config["samples"] = samples;

    ordered_json results = ordered_json::array();
    const unsigned workers = workers_of(c);
    const ShapeKind kind = shape_kind_from_string(shf.shape);
    const std::vector<double> grid = kind == ShapeKind::SosWulff ? std::vector<double>{0.0} : lambdas;
    for (double lambda : grid) {
        const ShapeModel shape = make_shape(shf, lambda);
        const DensityEstimate e = empirical_density(shape, n, samples, c.seed, workers);
        ordered_json r;
        r["shape"] = e.shape;
        r["lambda"] = kind == ShapeKind::SosWulff ? ordered_json(nullptr) : ordered_json(lambda);
        r["p_hat"] = e.p_hat;
        r["se"] = e.se;
        r["exact"] = nullptr;
        r["upper"] = nullptr;
        r["lower"] = nullptr;
        if (kind == ShapeKind::Cone) {
            r["exact"] = json_number(cone_density_exact(lambda));
            r["upper"] = json_number(cone_density_upper(lambda));
            if (lambda < 1.0) r["lower"] = json_number(cone_density_lower(lambda));
        } else if (kind == ShapeKind::Parabola && lambda < std::acos(-1.0) / 4.0) {
            r["upper"] = json_number(parabola_density_upper(lambda));
        }
        r["n"] = e.n;
        r["samples"] = e.samples;
        r["margin"] = e.margin;
        r["sites_used"] = e.sites_used;
        r["seed"] = e.seed;
        results.push_back(std::move(r));
    }
    ordered_json doc = metadata("density-scan", c, config);
    doc["results"] = results;
    write_json_file(c.out, doc);
    ordered_json summary = ordered_json::array();
    for (const auto& r : results) {
        summary.push_back({{"lambda", r["lambda"]}, {"p_hat", r["p_hat"]}, {"se", r["se"]}});
    }
    return {{"results", summary}};
}

ordered_json cmd_gibbs_check(const ShapeFlags& shf, int length, std::size_t mc_samples,
                             std::size_t substrates, const Common& c) {
    if (c.format != "json") throw ArgumentError("gibbs-check writes json only");
    if (length < 1 || length > 8) throw ArgumentError("--L must be in [1, 8]");
    const ShapeModel shape = make_shape(shf, shf.lambda);
    ordered_json config;
    shape_config(config, shf, true);
    config["L"] = length;
    config["mc_samples"] = mc_samples;
    config["substrates"] = substrates;

    const unsigned workers = workers_of(c);
    const std::uint64_t gibbs_seed = derive_seed(c.seed, 0);
    const auto comps = compositions(length);
    const auto freq = empirical_signatures(shape, length, substrates, derive_seed(c.seed, 1), workers);

    // Same per-composition streams as partition_function(shape, L, ..., gibbs_seed).
    double xi = 0.0;
    double xi_var = 0.0;
    double worst_z = 0.0;
    ordered_json sigs = ordered_json::array();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const McEstimate e =
            pattern_probability(shape, comps[k], mc_samples, derive_seed(gibbs_seed, k), workers);
        xi += e.value;
        xi_var += e.se * e.se;
        const double combined = std::sqrt(e.se * e.se + freq[k].se * freq[k].se);
        if (combined > 0.0) worst_z = std::max(worst_z, std::abs(e.value - freq[k].p) / combined);
        sigs.push_back({{"l", comps[k]},
                        {"p_gibbs", e.value},
                        {"se", e.se},
                        {"p_empirical", freq[k].p},
                        {"se_emp", freq[k].se}});
    }
    ordered_json doc = metadata("gibbs-check", c, config);
    doc["L"] = length;
    doc["shape"] = shape.describe();
    doc["Xi"] = xi;
    doc["Xi_se"] = std::sqrt(xi_var);
    doc["signatures"] = std::move(sigs);
    write_json_file(c.out, doc);
    return {{"Xi", xi}, {"Xi_se", std::sqrt(xi_var)}, {"max_z", worst_z}};
}

struct FilmFlags {
    std::size_t n = 512;
    SosParams sos;
    FilmRunConfig run;
    double threshold = 1.0;
    std::size_t nodes = WulffProfile::kDefaultNodes;
};

ordered_json cmd_film_mc(const FilmFlags& ff, const Common& c) {
    if (c.format != "csv") throw ArgumentError("film-mc writes csv with a json summary");
    ordered_json config{{"n", ff.n},
                        {"j1", ff.sos.j1},
                        {"k1", ff.sos.k1},
                        {"substrate_sweeps", ff.sos.sweeps},
                        {"substrate_burn_in", ff.sos.burn_in},
                        {"j2", ff.run.j2},
                        {"k2", ff.run.k2},
                        {"burn_in", ff.run.burn_in},
                        {"measure", ff.run.measure},
                        {"batches", ff.run.batches},
                        {"threshold", ff.threshold},
                        {"nodes", ff.nodes}};
    const Substrate sub = gen_sos_substrate(ff.n, ff.sos, derive_seed(c.seed, 0));
    const FilmState film = film_heat_bath_run(sub, ff.run, derive_seed(c.seed, 1));
    const ShapeModel shape = ShapeModel::sos_wulff(ff.run.j2, ff.run.k2, ff.nodes);
    const FilmComparison cmp = compare_film_to_necklace(film, shape, ff.threshold);

    const ordered_json meta = metadata("film-mc", c, config);
    Table t{{"i", "h1", "h2_avg", "I", "d"}, {}};
    for (std::size_t i = 0; i < ff.n; ++i) {
        t.rows.push_back({static_cast<std::int64_t>(i), sub[i], film.mean()[i], cmp.envelope[i],
                          cmp.deviation[i]});
    }
    write_table(c.out, c.format, meta, t);

    auto stats = [](const DeviationStats& s) {
        return ordered_json{{"sites", s.sites},
                            {"median_abs", s.median_abs},
                            {"mean", s.mean},
                            {"max_abs", s.max_abs}};
    };
    ordered_json doc = meta;
    doc["method"] = cmp.method;
    doc["exclusion_threshold"] = cmp.exclusion_threshold;
    doc["all"] = stats(cmp.all);
    doc["outside"] = stats(cmp.outside);
    doc["average_height"] = film.average_height();
    doc["average_height_se"] = film.average_height_se();
    doc["min_clearance"] = film.min_clearance();
    const std::string summary_path = c.out + ".json";
    write_json_file(summary_path, doc);
    return {{"method", cmp.method},
            {"median_abs_outside", cmp.outside.median_abs},
            {"mean_deviation_outside", cmp.outside.mean},
            {"summary_out", summary_path}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wulff necklaces on random substrates", "wulff-necklace"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    ShapeFlags shape;
    SubstrateFlags substrate;

    auto* gen = app.add_subcommand("gen-substrate", "write a random substrate as CSV i,h");
    add_substrate_flags(gen, substrate, 1000);
    add_common(gen, common, true);

    auto* prof = app.add_subcommand("wulff-profile", "tabulate the SOS Wulff shape as CSV x,w");
    prof->add_option("--j2", shape.j2, "film coupling")->capture_default_str();
    prof->add_option("--k2", shape.k2, "film pressure")->capture_default_str();
    prof->add_option("--nodes", shape.nodes, "table nodes")->capture_default_str();
    add_common(prof, common, true);

    double step = 0.25;
    auto* neck = app.add_subcommand("necklace", "contact set (n,b,h) and sampled envelope (x,I)");
    add_shape_flags(neck, shape, true);
    add_substrate_flags(neck, substrate, 1000);
    neck->add_option("--step", step, "envelope sampling step")->capture_default_str();
    add_common(neck, common, true);

    std::vector<double> lambdas;
    std::size_t density_n = 100000;
    std::size_t samples = 50;
    auto* dens = app.add_subcommand("density-scan", "empirical contact density against bounds");
    add_shape_flags(dens, shape, false);
    dens->add_option("--lambda", lambdas, "one or more lambdas (comma separated)")
        ->delimiter(',');
    dens->add_option("--n", density_n, "sites per substrate")->capture_default_str();
    dens->add_option("--samples", samples, "independent substrates")->capture_default_str();
    add_common(dens, common, false);

    int length = 5;
    std::size_t mc_samples = 200000;
    std::size_t substrates = 200000;
    auto* gibbs = app.add_subcommand("gibbs-check", "gap-signature Gibbs weights vs simulation");
    add_shape_flags(gibbs, shape, true);
    gibbs->add_option("--L", length, "window length")->capture_default_str();
    gibbs->add_option("--mc-samples", mc_samples, "MC draws per signature")->capture_default_str();
    gibbs->add_option("--substrates", substrates, "simulated substrates")->capture_default_str();
    add_common(gibbs, common, false);

    FilmFlags film;
    auto* fmc = app.add_subcommand("film-mc", "SOS film over an SOS substrate vs its necklace");
    fmc->add_option("--n", film.n, "sites")->capture_default_str();
    fmc->add_option("--j1", film.sos.j1, "substrate coupling")->capture_default_str();
    fmc->add_option("--k1", film.sos.k1, "substrate pressure")->capture_default_str();
    fmc->add_option("--substrate-sweeps", film.sos.sweeps, "substrate sweeps after burn-in")
        ->capture_default_str();
    fmc->add_option("--substrate-burn-in", film.sos.burn_in, "substrate burn-in sweeps")
        ->capture_default_str();
    fmc->add_option("--j2", film.run.j2, "film coupling")->capture_default_str();
    fmc->add_option("--k2", film.run.k2, "film pressure")->capture_default_str();
    fmc->add_option("--burn-in", film.run.burn_in, "film burn-in sweeps")->capture_default_str();
    fmc->add_option("--measure", film.run.measure, "measurement sweeps")->capture_default_str();
    fmc->add_option("--batches", film.run.batches, "batches for error bars")->capture_default_str();
    fmc->add_option("--threshold", film.threshold, "near-contact exclusion I - h1 below this")
        ->capture_default_str();
    fmc->add_option("--nodes", film.nodes, "profile nodes")->capture_default_str();
    add_common(fmc, common, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitArgument;
    }

    std::string name;
    ordered_json summary;
    try {
        if (gen->parsed()) {
            name = "gen-substrate";
            summary = cmd_gen_substrate(substrate, common);
        } else if (prof->parsed()) {
            name = "wulff-profile";
            summary = cmd_wulff_profile(shape, common);
        } else if (neck->parsed()) {
            name = "necklace";
            summary = cmd_necklace(shape, substrate, step, common);
        } else if (dens->parsed()) {
            name = "density-scan";
            common.format = "json";
            if (lambdas.empty() && shape_kind_from_string(shape.shape) != ShapeKind::SosWulff) {
                throw ArgumentError("--lambda is required");
            }
            summary = cmd_density_scan(shape, lambdas, density_n, samples, common);
        } else if (gibbs->parsed()) {
            name = "gibbs-check";
            common.format = "json";
            summary = cmd_gibbs_check(shape, length, mc_samples, substrates, common);
        } else if (fmc->parsed()) {
            name = "film-mc";
            summary = cmd_film_mc(film, common);
        }
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitArgument;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitArgument;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }

    ordered_json line;
    line["subcommand"] = name;
    line["status"] = "ok";
    line["out"] = common.out;
    line["seed"] = common.seed;
    for (auto it = summary.begin(); it != summary.end(); ++it) line[it.key()] = it.value();
    out << line.dump() << '\n';
    return kExitOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace wulff::cli
