// ruincli: ruin probabilities for integer-payoff games from the command line.
//
//   ruincli compute --spec game.json --wealth 3,10,50 [--mode verify] ...
//   ruincli roots   --spec game.json
//
// Exit codes: 0 success, 2 bad input (spec file, flags, validation),
// 3 numerical failure or an oracle disagreement in verify mode.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruincalc/errors.hpp"
#include "ruincalc/oracles.hpp"
#include "ruincalc/payoff.hpp"
#include "ruincalc/roots.hpp"
#include "ruincalc/ruin.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string spec_path;
    std::string wealth_expr;
    std::string mode = "formula";
    std::string format = "table";
    std::string out_path; // empty = stdout
    long long mc_paths = 100000;
    unsigned long long seed = 1;
    double dp_eps = 1e-8;
    double tail_tol = ruincalc::kDefaultTailTol;
};

// "3,10,50" or "1..20"
std::vector<int> parse_wealth_list(const std::string& expr) {
    std::vector<int> out;
    auto parse_int = [&](const std::string& tok) {
        std::size_t pos = 0;
        int v;
        try {
            v = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw ruincalc::InvalidArgument("--wealth: \"" + tok +
                                            "\" is not an integer");
        }
        if (pos != tok.size())
            throw ruincalc::InvalidArgument("--wealth: \"" + tok +
                                            "\" is not an integer");
        if (v < 0)
            throw ruincalc::InvalidArgument("--wealth: values must be >= 0");
        return v;
    };

    if (const auto dots = expr.find(".."); dots != std::string::npos) {
        const int a = parse_int(expr.substr(0, dots));
        const int b = parse_int(expr.substr(dots + 2));
        if (b < a)
            throw ruincalc::InvalidArgument("--wealth: range end below start");
        if (b - a >= 1000000)
            throw ruincalc::InvalidArgument("--wealth: range too large");
        for (int m = a; m <= b; ++m)
            out.push_back(m);
        return out;
    }

    std::stringstream ss(expr);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(parse_int(tok));
    if (out.empty())
        throw ruincalc::InvalidArgument("--wealth: need at least one value");
    return out;
}

struct Row {
    ruincalc::RuinResult result;
    std::optional<ruincalc::OracleReport> oracles;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

void write_table(std::ostream& os, const ruincalc::PayoffDistribution& d,
                 const ruincalc::DiskRoots* roots, const std::vector<Row>& rows,
                 bool verify) {
    os << "payoff: " << ruincalc::describe(d.family()) << "\n";
    os << "mean: " << fmt("%.6f", d.mean()) << "   max loss: " << d.max_loss()
       << "   max gain: " << d.max_gain()
       << "   tail bound: " << fmt("%.3g", d.tail_mass_bound()) << "\n";
    if (roots) {
        os << "z*: " << fmt("%.6f", roots->z_star)
           << "   roots in disk: " << roots->count()
           << "   max |eta|: " << fmt("%.6f", roots->max_abs()) << "\n";
    }
    os << "\n";

    if (!verify) {
        os << "     M      p_ruin    method\n";
        for (const Row& row : rows) {
            const auto& r = row.result;
            char line[128];
            std::snprintf(line, sizeof line, "%6d  %10.6f  %8s\n",
                          r.initial_wealth, r.p_ruin,
                          ruincalc::to_string(r.method));
            os << line;
        }
        return;
    }

    for (const Row& row : rows) {
        const auto& r = row.result;
        os << "M = " << r.initial_wealth << "   p_ruin = "
           << fmt("%.6f", r.p_ruin) << " (" << ruincalc::to_string(r.method)
           << ")\n";
        if (!row.oracles) {
            os << "  oracles skipped (trivial case)\n\n";
            continue;
        }
        const auto& o = *row.oracles;
        os << "  dp        in [" << fmt("%.8f", o.dp.lower) << ", "
           << fmt("%.8f", o.dp.upper()) << "] after " << o.dp.steps
           << " steps" << (o.dp.converged ? "" : " (not converged)") << "   "
           << (o.dp_ok ? "ok" : "FAIL") << "\n";
        os << "  mc        " << fmt("%.6f", o.mc.estimate) << " +- "
           << fmt("%.6f", o.mc.ci_halfwidth) << " (" << o.mc.n_paths
           << " paths, censored " << fmt("%.3g", o.mc.censored_fraction)
           << ")   " << (o.mc_ok ? "ok" : "FAIL") << "\n";
        os << "  finite_w  " << fmt("%.6f", o.finite_w.back().second)
           << " at W=" << o.finite_w.back().first << " ("
           << (o.fw_monotone ? "monotone" : "NOT monotone") << ", extrap "
           << fmt("%.6f", o.fw_extrapolated) << ")   "
           << (o.fw_ok ? "ok" : "FAIL") << "\n\n";
    }
}

void write_csv(std::ostream& os, const std::vector<Row>& rows, bool verify) {
    os << "M,p_ruin,method,max_root_abs";
    if (verify)
        os << ",dp_lower,dp_gap,dp_ok,mc_estimate,mc_ci,mc_censored,mc_ok,"
              "fw_value,fw_w,fw_ok,all_ok";
    os << "\n";
    for (const Row& row : rows) {
        const auto& r = row.result;
        os << r.initial_wealth << "," << full(r.p_ruin) << ","
           << ruincalc::to_string(r.method) << "," << full(r.max_root_abs);
        if (verify) {
            if (row.oracles) {
                const auto& o = *row.oracles;
                os << "," << full(o.dp.lower) << "," << full(o.dp.bound_gap)
                   << "," << (o.dp_ok ? 1 : 0) << "," << full(o.mc.estimate)
                   << "," << full(o.mc.ci_halfwidth) << ","
                   << full(o.mc.censored_fraction) << "," << (o.mc_ok ? 1 : 0)
                   << "," << full(o.finite_w.back().second) << ","
                   << o.finite_w.back().first << "," << (o.fw_ok ? 1 : 0)
                   << "," << (o.all_ok() ? 1 : 0);
            } else {
                os << ",,,,,,,,,,1"; // trivial: nothing to check
            }
        }
        os << "\n";
    }
}

ordered_json distribution_json(const ruincalc::PayoffDistribution& d) {
    ordered_json j;
    j["family"] = ruincalc::describe(d.family());
    j["max_loss"] = d.max_loss();
    j["max_gain"] = d.max_gain();
    j["mean"] = d.mean();
    j["truncated"] = d.truncated();
    j["tail_mass_bound"] = d.tail_mass_bound();
    return j;
}

ordered_json roots_json(const ruincalc::DiskRoots& roots) {
    ordered_json j;
    j["z_star"] = roots.z_star;
    j["count"] = roots.count();
    ordered_json items = ordered_json::array();
    for (int i = 0; i < roots.count(); ++i) {
        ordered_json item;
        item["re"] = roots.roots[static_cast<std::size_t>(i)].real();
        item["im"] = roots.roots[static_cast<std::size_t>(i)].imag();
        item["abs"] = std::abs(roots.roots[static_cast<std::size_t>(i)]);
        item["residual"] = roots.residuals[static_cast<std::size_t>(i)];
        item["clustered"] =
            roots.cluster_flags[static_cast<std::size_t>(i)] != 0;
        items.push_back(item);
    }
    j["items"] = items;
    return j;
}

ordered_json report_json(const RunConfig& cfg,
                         const ruincalc::PayoffDistribution& d,
                         const ruincalc::DiskRoots* roots,
                         const std::vector<Row>& rows, bool verify) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = cfg.mode;
    j["distribution"] = distribution_json(d);
    if (roots)
        j["roots"] = roots_json(*roots);
    ordered_json results = ordered_json::array();
    for (const Row& row : rows) {
        const auto& r = row.result;
        ordered_json item;
        item["wealth"] = r.initial_wealth;
        item["p_ruin"] = r.p_ruin;
        item["method"] = ruincalc::to_string(r.method);
        item["max_root_abs"] = r.max_root_abs;
        item["final_fortune"] = r.final_fortune;
        item["imag_residual"] = r.imag_residual;
        if (r.cross_form_gap)
            item["cross_form_gap"] = *r.cross_form_gap;
        if (verify) {
            ordered_json oj;
            if (row.oracles) {
                const auto& o = *row.oracles;
                oj["dp"] = {{"lower", o.dp.lower},
                            {"bound_gap", o.dp.bound_gap},
                            {"steps", o.dp.steps},
                            {"converged", o.dp.converged},
                            {"ok", o.dp_ok}};
                oj["mc"] = {{"estimate", o.mc.estimate},
                            {"ci_halfwidth", o.mc.ci_halfwidth},
                            {"n_paths", o.mc.n_paths},
                            {"censored_fraction", o.mc.censored_fraction},
                            {"ceiling_bias_bound", o.mc.ceiling_bias_bound},
                            {"ok", o.mc_ok}};
                ordered_json fw = ordered_json::array();
                for (const auto& [w, v] : o.finite_w)
                    fw.push_back({{"W", w}, {"value", v}});
                oj["finite_w"] = {{"values", fw},
                                  {"extrapolated", o.fw_extrapolated},
                                  {"monotone", o.fw_monotone},
                                  {"ok", o.fw_ok}};
                oj["all_ok"] = o.all_ok();
            } else {
                oj["skipped"] = "trivial case";
                oj["all_ok"] = true;
            }
            item["oracles"] = oj;
        }
        results.push_back(item);
    }
    j["results"] = results;
    return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out)
        throw ruincalc::InvalidArgument("cannot open output file: " +
                                        cfg.out_path);
    out << text;
}

int run_compute(const RunConfig& cfg) {
    const ruincalc::FamilySpec fam = ruincalc::parse_spec_file(cfg.spec_path);
    const ruincalc::PayoffDistribution d =
        ruincalc::PayoffDistribution::build(fam, cfg.tail_tol);
    const std::vector<int> wealths = parse_wealth_list(cfg.wealth_expr);
    const bool verify = cfg.mode == "verify";

    std::optional<ruincalc::DiskRoots> roots;
    if (d.favorable())
        roots = ruincalc::find_disk_roots(d);

    ruincalc::RuinOptions ropts;
    ropts.tail_tol = cfg.tail_tol;

    std::vector<Row> rows;
    rows.reserve(wealths.size());
    for (int m : wealths) {
        Row& row = rows.emplace_back();
        row.result = roots
                         ? ruincalc::ruin_probability(d, *roots, m, ropts)
                         : ruincalc::ruin_probability(d, m, ropts);
        if (verify && row.result.method != ruincalc::RuinMethod::trivial) {
            ruincalc::CrossCheckOptions cc;
            cc.dp.eps = cfg.dp_eps;
            cc.mc.n_paths = cfg.mc_paths;
            cc.mc.seed = cfg.seed;
            row.oracles = ruincalc::cross_check(d, m, row.result.p_ruin, cc);
        }
    }

    std::ostringstream os;
    if (cfg.format == "table")
        write_table(os, d, roots ? &*roots : nullptr, rows, verify);
    else if (cfg.format == "csv")
        write_csv(os, rows, verify);
    else
        os << report_json(cfg, d, roots ? &*roots : nullptr, rows, verify)
                  .dump(2)
           << "\n";
    emit(cfg, os.str());

    if (verify)
        for (const Row& row : rows)
            if (row.oracles && !row.oracles->all_ok()) {
                std::cerr << "verify: oracle disagreement at wealth "
                          << row.result.initial_wealth << "\n";
                return 3;
            }
    return 0;
}

int run_roots(const RunConfig& cfg) {
    const ruincalc::FamilySpec fam = ruincalc::parse_spec_file(cfg.spec_path);
    const ruincalc::PayoffDistribution d =
        ruincalc::PayoffDistribution::build(fam, cfg.tail_tol);
    const ruincalc::DiskRoots roots = ruincalc::find_disk_roots(d);

    std::ostringstream os;
    if (cfg.format == "json") {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["distribution"] = distribution_json(d);
        j["roots"] = roots_json(roots);
        os << j.dump(2) << "\n";
    } else {
        os << "payoff: " << ruincalc::describe(d.family()) << "\n";
        os << "z*: " << full(roots.z_star) << "\n";
        os << "roots in disk: " << roots.count() << "\n";
        for (int i = 0; i < roots.count(); ++i) {
            const auto z = roots.roots[static_cast<std::size_t>(i)];
            char line[160];
            std::snprintf(line, sizeof line,
                          "  %20.15f %+20.15fi   |z| %.15f   residual %.2e%s\n",
                          z.real(), z.imag(), std::abs(z),
                          roots.residuals[static_cast<std::size_t>(i)],
                          roots.cluster_flags[static_cast<std::size_t>(i)]
                              ? "   clustered"
                              : "");
            os << line;
        }
    }
    emit(cfg, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact ruin probabilities for integer-payoff games"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* compute =
        app.add_subcommand("compute", "ruin probabilities over wealth values");
    compute->add_option("--spec", cfg.spec_path, "payoff spec JSON file")
        ->required();
    compute
        ->add_option("--wealth", cfg.wealth_expr,
                     "initial wealths: comma list (3,10,50) or range (1..20)")
        ->required();
    compute->add_option("--mode", cfg.mode, "formula | verify")
        ->check(CLI::IsMember({"formula", "verify"}));
    compute->add_option("--format", cfg.format, "table | csv | json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    compute->add_option("--mc-paths", cfg.mc_paths,
                        "Monte Carlo paths in verify mode")
        ->check(CLI::PositiveNumber);
    compute->add_option("--seed", cfg.seed, "Monte Carlo seed");
    compute->add_option("--dp-eps", cfg.dp_eps,
                        "target enclosure width for the dp oracle")
        ->check(CLI::PositiveNumber);
    compute->add_option("--tail-tol", cfg.tail_tol,
                        "tail mass allowed when truncating analytic families");
    compute->add_option("--out", cfg.out_path, "output file (default stdout)");

    CLI::App* roots =
        app.add_subcommand("roots", "in-disk roots of p(z) = 1");
    roots->add_option("--spec", cfg.spec_path, "payoff spec JSON file")
        ->required();
    roots->add_option("--format", cfg.format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));
    roots->add_option("--tail-tol", cfg.tail_tol,
                      "tail mass allowed when truncating analytic families");
    roots->add_option("--out", cfg.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (compute->parsed())
            return run_compute(cfg);
        return run_roots(cfg);
    } catch (const ruincalc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ruincalc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
