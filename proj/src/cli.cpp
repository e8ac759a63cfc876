#include "stbclab/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stbclab/io.hpp"
#include "stbclab/parallel.hpp"

namespace stbclab {

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("STBCLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("STBCLAB_SEED must be an unsigned integer");
        }
    }
    return 1;
}

json config_header(const std::string& command, const json& config, std::uint64_t seed) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    return j;
}

std::string csv_preamble(const json& header) {
    std::ostringstream out;
    out << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
    out << "# command: " << header.at("command").get<std::string>() << '\n';
    out << "# config: " << header.at("config").dump() << '\n';
    out << "# seed: " << header.at("seed").get<std::uint64_t>() << '\n';
    return out.str();
}

void emit(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text_atomic(out_path, text);
}

std::vector<double> parse_r_grid(const std::string& spec) { return parse_grid(spec); }

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::string token;
    std::istringstream ss(spec);
    while (std::getline(ss, token, ':')) {
        try {
            parts.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw ConfigError("bad grid token '" + token + "' in '" + spec + "'");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ConfigError("grid must be a single value or start:step:stop");
    const double start = parts[0], step = parts[1], stop = parts[2];
    if (step <= 0) throw ConfigError("grid step must be positive");
    if (stop < start) throw ConfigError("grid stop must be >= start");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double v = start + step * i;
        if (v > stop + 1e-9) break;
        grid.push_back(v);
    }
    return grid;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"space-time block code laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config");

    unsigned workers = default_workers();
    app.add_option("--workers", workers, "worker threads for searches and simulations");

    // ---- codes ----
    auto* codes = app.add_subcommand("codes", "catalog inspection");
    codes->require_subcommand(1);
    auto* codes_list = codes->add_subcommand("list", "list catalog entries");
    bool codes_json = false;
    codes_list->add_flag("--json", codes_json, "emit JSON");
    auto* codes_info = codes->add_subcommand("info", "show one catalog entry");
    std::string info_name;
    codes_info->add_option("name", info_name, "code name")->required();
    bool info_json = false;
    codes_info->add_flag("--json", info_json, "emit JSON");

    // ---- mindet ----
    auto* mindet = app.add_subcommand("mindet", "minimum-determinant search");
    std::string md_code;
    mindet->add_option("code", md_code, "catalog code name")->required();
    int md_m = 0, md_b = 0;
    mindet->add_option("--M", md_m, "constellation level for a code-difference search");
    mindet->add_option("--integer", md_b, "integer-box bound B for a design search");
    std::uint64_t md_cap = kDefaultSearchCap;
    mindet->add_option("--cap", md_cap, "enumeration cap");
    std::uint64_t md_rand = 0;
    mindet->add_option("--randomized", md_rand, "sample this many random vectors instead");
    std::string md_out;
    mindet->add_option("--out", md_out, "output JSON path (default stdout)");

    // ---- criterion ----
    auto* crit = app.add_subcommand("criterion", "determinant-exponent criterion verdicts");
    std::string cr_code;
    crit->add_option("--code", cr_code, "catalog code name")->required();
    int cr_nr = 1;
    crit->add_option("--nr", cr_nr, "receive antennas")->required();
    std::string cr_r = "0";
    crit->add_option("--r", cr_r, "multiplexing gain value or grid a:b:c");
    std::string cr_which = "both";
    crit->add_option("--which", cr_which, "enhanced | baseline | both");
    std::string cr_snr = "20:2:60";
    crit->add_option("--snr", cr_snr, "SNR grid in dB (start:step:stop)");
    int cr_m = 2;
    crit->add_option("--M", cr_m, "constellation level used for the design minimum");
    bool cr_stab = false;
    crit->add_flag("--check-stabilization", cr_stab,
                   "also search at the next level up and report whether the minimum moved");
    std::uint64_t cr_cap = kDefaultSearchCap;
    crit->add_option("--cap", cr_cap, "enumeration cap");
    std::string cr_out;
    crit->add_option("--out", cr_out, "output JSON path (default stdout)");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo simulation");
    sim->require_subcommand(1);

    auto* pe = sim->add_subcommand("pe", "codeword error probability");
    std::string pe_code;
    pe->add_option("--code", pe_code, "catalog code name")->required();
    int pe_nr = 1;
    pe->add_option("--nr", pe_nr, "receive antennas")->required();
    double pe_r = 0.0;
    pe->add_option("--r", pe_r, "multiplexing gain");
    std::string pe_snr = "14:2:30";
    pe->add_option("--snr", pe_snr, "SNR grid in dB");
    std::uint64_t pe_trials = 100000;
    pe->add_option("--trials", pe_trials, "max trials per SNR point");
    std::uint64_t pe_errors = 200;
    pe->add_option("--max-errors", pe_errors, "stop a point after this many errors (0 = never)");
    std::uint64_t pe_seed = default_seed();
    pe->add_option("--seed", pe_seed, "RNG seed");
    std::string pe_dec = "sphere";
    pe->add_option("--decoder", pe_dec, "sphere | exhaustive");
    bool pe_even = false;
    pe->add_flag("--even-only", pe_even, "restrict the M-schedule to even sizes");
    double pe_window = 1.0;
    pe->add_option("--slope-window", pe_window, "top fraction of the grid used for the slope");
    std::string pe_out;
    pe->add_option("--out", pe_out, "output prefix (writes <prefix>.csv and <prefix>.json)")
        ->required();

    auto* og = sim->add_subcommand("outage", "channel outage probability");
    std::size_t og_nt = 2, og_nr = 2;
    og->add_option("--nt", og_nt, "transmit antennas")->required();
    og->add_option("--nr", og_nr, "receive antennas")->required();
    double og_r = 0.0;
    og->add_option("--r", og_r, "multiplexing gain of the rate schedule");
    double og_offset = 1.0;
    og->add_option("--rate-offset", og_offset, "constant rate offset in bits");
    std::string og_snr = "10:2:30";
    og->add_option("--snr", og_snr, "SNR grid in dB");
    std::uint64_t og_trials = 100000;
    og->add_option("--trials", og_trials, "trials per SNR point");
    std::uint64_t og_seed = default_seed();
    og->add_option("--seed", og_seed, "RNG seed");
    bool og_is = false;
    og->add_flag("--importance", og_is, "variance-scaled sampling for deep tails");
    double og_window = 1.0;
    og->add_option("--slope-window", og_window, "top fraction of the grid used for the slope");
    std::string og_out;
    og->add_option("--out", og_out, "output prefix (writes <prefix>.csv and <prefix>.json)")
        ->required();

    // ---- dmt ----
    auto* dmt = app.add_subcommand("dmt", "tradeoff curves and theory oracles");
    dmt->require_subcommand(1);

    auto* opt = dmt->add_subcommand("optimal", "optimal tradeoff curve");
    int do_nt = 2, do_nr = 2;
    opt->add_option("--nt", do_nt)->required();
    opt->add_option("--nr", do_nr)->required();
    double do_r = -1.0;
    opt->add_option("--r", do_r, "also evaluate the curve at this gain");
    std::string do_out;
    opt->add_option("--out", do_out, "output JSON path (default stdout)");

    auto* est = dmt->add_subcommand("estimate", "slope estimate from a CSV file");
    std::string est_csv;
    est->add_option("--csv", est_csv, "CSV with snr_db and pe columns")->required();
    double est_window = 1.0;
    est->add_option("--window", est_window, "top fraction of points to fit");
    std::string est_out;
    est->add_option("--out", est_out, "output JSON path (default stdout)");

    auto* kkt = dmt->add_subcommand("kkt", "water-filling solution with cross-check");
    int kk_nt = 2, kk_nr = 2;
    kkt->add_option("--nt", kk_nt)->required();
    kkt->add_option("--nr", kk_nr)->required();
    std::string kk_dsq = "1";
    kkt->add_option("--dsq", kk_dsq, "comma-separated squared singular values")->required();
    double kk_snr_db = 30.0;
    kkt->add_option("--snr-db", kk_snr_db, "SNR in dB");
    double kk_rdelta = 0.5;
    kkt->add_option("--rdelta", kk_rdelta, "r + delta");
    int kk_restarts = 8;
    kkt->add_option("--restarts", kk_restarts, "cross-check restarts");
    std::uint64_t kk_seed = default_seed();
    kkt->add_option("--seed", kk_seed, "RNG seed");
    std::string kk_out;
    kkt->add_option("--out", kk_out, "output JSON path (default stdout)");

    auto* noe = dmt->add_subcommand("near-outage", "near-outage decay exponent");
    int no_nt = 2, no_nr = 2;
    noe->add_option("--nt", no_nt)->required();
    noe->add_option("--nr", no_nr)->required();
    double no_r = 0.0;
    noe->add_option("--r", no_r, "multiplexing gain")->required();
    std::uint64_t no_seed = default_seed();
    noe->add_option("--seed", no_seed, "RNG seed");
    std::string no_out;
    noe->add_option("--out", no_out, "output JSON path (default stdout)");

    // parse
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*codes_list) {
            if (codes_json) {
                json arr = json::array();
                for (const CatalogEntry& e : catalog())
                    arr.push_back(json{{"name", e.name},
                                       {"nt", e.nt},
                                       {"T", e.t},
                                       {"rate", e.rate},
                                       {"nr", e.nr_note},
                                       {"constellation", e.constellation},
                                       {"external", e.external},
                                       {"description", e.description}});
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const CatalogEntry& e : catalog())
                    std::cout << e.name << (e.external ? "  [external]" : "") << "\n";
            }
            return 0;
        }
        if (*codes_info) {
            const CatalogEntry& e = catalog_entry(info_name);
            if (info_json) {
                json j{{"name", e.name},        {"nt", e.nt},
                       {"T", e.t},              {"rate", e.rate},
                       {"nr", e.nr_note},       {"constellation", e.constellation},
                       {"external", e.external}, {"description", e.description}};
                if (e.code) {
                    j["k"] = e.code->k;
                    j["code"] = to_json(*e.code);
                }
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "name:          " << e.name << "\n";
                std::cout << "n_t:           " << e.nt << "\n";
                std::cout << "T:             " << e.t << "\n";
                if (e.code) std::cout << "k:             " << e.code->k << "\n";
                std::cout << "code rate:     " << e.rate << " complex dpcu\n";
                std::cout << "target n_r:    " << e.nr_note << "\n";
                std::cout << "constellation: " << e.constellation << "\n";
                std::cout << "construction:  " << (e.external ? "external" : "built-in") << "\n";
                std::cout << "notes:         " << e.description << "\n";
            }
            return 0;
        }

        if (*mindet) {
            if ((md_m > 0) == (md_b > 0))
                throw ConfigError("mindet: pass exactly one of --M or --integer");
            LinearStbc code = catalog_code(md_code);
            MinDetReport rep = md_m > 0
                                   ? min_det_code(code, md_m, md_cap, workers)
                                   : min_det_z(code, md_b, md_cap, workers, md_rand,
                                               default_seed());
            json cfg{{"code", md_code}, {"M", md_m},   {"integer", md_b},
                     {"cap", md_cap},   {"randomized", md_rand}};
            json doc = config_header("mindet", cfg, default_seed());
            doc["results"] = to_json(rep);
            emit(doc, md_out);
            return 0;
        }

        if (*crit) {
            LinearStbc code = catalog_code(cr_code);
            std::vector<double> snr_grid = parse_grid(cr_snr);
            std::vector<double> r_values = parse_r_grid(cr_r);
            std::vector<Criterion> which;
            if (cr_which == "both") which = {Criterion::enhanced, Criterion::baseline};
            else which = {criterion_from_string(cr_which)};

            MinDetReport c0 = min_det_code(code, cr_m, cr_cap, workers);
            json results = json::array();
            bool all_pass = true;
            for (double r : r_values)
                for (Criterion w : which) {
                    SchemeConfig cfg = scheme(code, r, snr_grid);
                    CriterionVerdict v = criterion_check(cfg, cr_nr, w, c0);
                    all_pass = all_pass && v.pass;
                    results.push_back(to_json(v));
                }
            json cfg{{"code", cr_code}, {"nr", cr_nr},   {"r", cr_r},
                     {"which", cr_which}, {"snr", cr_snr}, {"M", cr_m}};
            json doc = config_header("criterion", cfg, default_seed());
            doc["design_minimum"] = to_json(c0);
            if (cr_stab) {
                const int m_next = cr_m + 2;
                MinDetReport next = min_det_code(code, m_next, cr_cap, workers);
                doc["stabilization"] = json{{"m", cr_m},
                                            {"value", c0.value},
                                            {"m_next", m_next},
                                            {"value_next", next.value},
                                            {"stable", std::abs(next.value - c0.value) <=
                                                           1e-9 * std::max(1.0, c0.value)}};
            }
            doc["results"] = results;
            doc["all_pass"] = all_pass;
            emit(doc, cr_out);
            return 0;
        }

        if (*pe) {
            LinearStbc code = catalog_code(pe_code);
            SimJob job;
            job.scheme = scheme(code, pe_r, parse_grid(pe_snr), pe_even);
            job.nr = pe_nr;
            job.max_trials = pe_trials;
            job.target_errors = pe_errors;
            job.seed = pe_seed;
            if (pe_dec == "sphere") job.decoder = DecoderChoice::sphere;
            else if (pe_dec == "exhaustive") job.decoder = DecoderChoice::exhaustive;
            else throw ConfigError("simulate pe: decoder must be sphere or exhaustive");
            job.workers = workers;
            job.slope_window = pe_window;

            SimStats stats = error_probability(job);
            json cfg{{"code", pe_code},     {"nr", pe_nr},
                     {"r", pe_r},           {"snr", pe_snr},
                     {"trials", pe_trials}, {"max_errors", pe_errors},
                     {"decoder", pe_dec},   {"even_only", pe_even},
                     {"slope_window", pe_window}};
            json doc = config_header("simulate pe", cfg, pe_seed);
            doc["results"] = to_json(stats);
            write_text_atomic(pe_out + ".csv", csv_preamble(doc) + pe_csv(stats));
            write_text_atomic(pe_out + ".json", doc.dump(2) + "\n");
            return 0;
        }

        if (*og) {
            OutageJob job;
            job.nt = og_nt;
            job.nr = og_nr;
            job.r = og_r;
            job.rate_offset_bits = og_offset;
            job.snr_grid_db = parse_grid(og_snr);
            job.trials = og_trials;
            job.seed = og_seed;
            job.importance = og_is;
            job.workers = workers;
            job.slope_window = og_window;

            OutageResult res = outage_probability(job);
            json cfg{{"nt", og_nt},         {"nr", og_nr},
                     {"r", og_r},           {"rate_offset", og_offset},
                     {"snr", og_snr},       {"trials", og_trials},
                     {"importance", og_is}, {"slope_window", og_window}};
            json doc = config_header("simulate outage", cfg, og_seed);
            doc["results"] = to_json(res);
            write_text_atomic(og_out + ".csv", csv_preamble(doc) + outage_csv(res));
            write_text_atomic(og_out + ".json", doc.dump(2) + "\n");
            return 0;
        }

        if (*opt) {
            DmtCurve c = optimal_dmt(do_nt, do_nr);
            json cfg{{"nt", do_nt}, {"nr", do_nr}};
            json doc = config_header("dmt optimal", cfg, default_seed());
            doc["results"] = to_json(c);
            if (do_r >= 0) doc["results"]["d_at_r"] = c.eval(do_r);
            emit(doc, do_out);
            return 0;
        }

        if (*est) {
            auto pts = read_snr_pe_csv(est_csv);
            SlopeFit fit = dmt_slope(pts, est_window);
            json cfg{{"csv", est_csv}, {"window", est_window}};
            json doc = config_header("dmt estimate", cfg, default_seed());
            doc["results"] = json{{"slope", fit.slope},
                                  {"stderr", fit.stderr_},
                                  {"points_used", fit.points_used}};
            emit(doc, est_out);
            return 0;
        }

        if (*kkt) {
            KktProblem p;
            p.nt = kk_nt;
            p.nr = kk_nr;
            std::istringstream ss(kk_dsq);
            std::string tok;
            while (std::getline(ss, tok, ',')) p.d_sq.push_back(std::stod(tok));
            p.snr = db_to_linear(kk_snr_db);
            p.r = kk_rdelta;
            p.delta = 0.0;
            KktSolution sol = kkt_waterfill(p);
            KktCrossCheck chk = kkt_crosscheck(p, kk_restarts, kk_seed, workers);
            json cfg{{"nt", kk_nt},         {"nr", kk_nr},
                     {"dsq", kk_dsq},       {"snr_db", kk_snr_db},
                     {"rdelta", kk_rdelta}, {"restarts", kk_restarts}};
            json doc = config_header("dmt kkt", cfg, kk_seed);
            doc["results"] = to_json(p, sol);
            doc["results"]["crosscheck"] = to_json(chk);
            emit(doc, kk_out);
            return 0;
        }

        if (*noe) {
            NearOutageExponent e = near_outage_exponent(no_nt, no_nr, no_r, 64, no_seed);
            json cfg{{"nt", no_nt}, {"nr", no_nr}, {"r", no_r}};
            json doc = config_header("dmt near-outage", cfg, no_seed);
            doc["results"] = to_json(e);
            emit(doc, no_out);
            return 0;
        }

        throw ConfigError("no command selected");
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace stbclab
