#include "stbclab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace stbclab {

json to_json(const LinearStbc& code) {
    json j;
    j["name"] = code.name;
    j["nt"] = code.nt;
    j["T"] = code.t;
    j["k"] = code.k;
    j["coord_kind"] = code.coord_kind == CoordKind::pam ? "pam" : "integer";
    json ws = json::array();
    for (const CMat& w : code.weights) {
        json re = json::array(), im = json::array();
        for (const cplx& e : w.entries()) {
            re.push_back(e.real());
            im.push_back(e.imag());
        }
        ws.push_back(json{{"re", re}, {"im", im}});
    }
    j["weights"] = ws;
    return j;
}

LinearStbc stbc_from_json(const json& j) {
    LinearStbc code;
    code.name = j.at("name").get<std::string>();
    code.nt = j.at("nt").get<std::size_t>();
    code.t = j.at("T").get<std::size_t>();
    code.k = j.at("k").get<std::size_t>();
    const std::string kind = j.at("coord_kind").get<std::string>();
    if (kind == "pam") code.coord_kind = CoordKind::pam;
    else if (kind == "integer") code.coord_kind = CoordKind::integer;
    else throw ConfigError("code json: unknown coord_kind '" + kind + "'");
    for (const json& wj : j.at("weights")) {
        const auto& re = wj.at("re");
        const auto& im = wj.at("im");
        if (re.size() != code.nt * code.t || im.size() != re.size())
            throw ConfigError("code json: weight entry count must be nt*T");
        CMat w(code.nt, code.t);
        for (std::size_t e = 0; e < re.size(); ++e)
            w.entries()[e] = cplx(re[e].get<double>(), im[e].get<double>());
        code.weights.push_back(std::move(w));
    }
    validate(code);
    return code;
}

json to_json(const MinDetReport& r) {
    json j;
    j["code"] = r.code;
    j["value"] = r.value;
    j["argmin"] = r.argmin;
    if (r.constellation_m > 0) j["constellation_m"] = r.constellation_m;
    if (r.search_bound > 0) j["search_bound"] = r.search_bound;
    j["exhaustive"] = r.exhaustive;
    j["evaluated"] = r.evaluated;
    return j;
}

json to_json(const CriterionVerdict& v) {
    json j;
    j["code"] = v.code;
    j["nr"] = v.nr;
    j["r"] = v.r;
    j["criterion"] = to_string(v.which);
    j["required_exponent"] = v.required_exponent;
    json pts = json::array();
    for (const auto& [db, e] : v.measured_exponents)
        pts.push_back(json{{"snr_db", db}, {"exponent", e}});
    j["measured_exponents"] = pts;
    j["slope"] = v.slope;
    j["pass"] = v.pass;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json to_json(const DmtCurve& c) {
    json j;
    j["nt"] = c.nt;
    j["nr"] = c.nr;
    json vs = json::array();
    for (const auto& [k, d] : c.vertices) vs.push_back(json::array({k, d}));
    j["vertices"] = vs;
    return j;
}

json to_json(const KktProblem& p, const KktSolution& s) {
    json j;
    j["nt"] = p.nt;
    j["nr"] = p.nr;
    j["d_sq"] = p.d_sq;
    j["snr"] = p.snr;
    j["r_plus_delta"] = p.r + p.delta;
    j["lambda"] = s.lambda;
    json rows = json::array();
    for (std::size_t i = 0; i < s.a.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < s.a.cols(); ++k) row.push_back(s.a(i, k));
        rows.push_back(row);
    }
    j["a"] = rows;
    j["objective"] = s.objective;
    j["constraint_residual"] = s.constraint_residual;
    return j;
}

json to_json(const KktCrossCheck& c) {
    json j;
    j["objective_kkt"] = c.objective_kkt;
    j["objective_pg"] = c.objective_pg;
    j["gap"] = c.gap;
    j["converged"] = c.converged;
    return j;
}

json to_json(const NearOutageExponent& e) {
    json j;
    j["infimum"] = e.infimum;
    j["closed_form"] = e.closed_form;
    json pe = json::array();
    for (const auto& [eta, v] : e.per_eta) pe.push_back(json{{"eta", eta}, {"infimum", v}});
    j["per_eta"] = pe;
    j["matches_closed_form"] = e.matches_closed_form;
    return j;
}

json to_json(const SimStats& s) {
    json j;
    json pts = json::array();
    for (const PointStats& p : s.points) {
        pts.push_back(json{{"snr_db", p.snr_db},
                           {"trials", p.trials},
                           {"errors", p.errors},
                           {"pe", p.pe},
                           {"ci_lo", p.ci_lo},
                           {"ci_hi", p.ci_hi},
                           {"decoder_fallbacks", p.decoder_fallbacks}});
    }
    j["points"] = pts;
    if (s.slope) {
        j["slope"] = s.slope->slope;
        j["slope_stderr"] = s.slope->stderr_;
        j["slope_points"] = s.slope->points_used;
    }
    return j;
}

json to_json(const OutageResult& o) {
    json j;
    json pts = json::array();
    for (const OutagePoint& p : o.points) {
        pts.push_back(json{{"snr_db", p.snr_db},
                           {"trials", p.trials},
                           {"rate_bits", p.rate_bits},
                           {"p", p.p},
                           {"ci_lo", p.ci_lo},
                           {"ci_hi", p.ci_hi}});
    }
    j["points"] = pts;
    j["importance_sampling"] = o.importance;
    if (o.slope) {
        j["slope"] = o.slope->slope;
        j["slope_stderr"] = o.slope->stderr_;
        j["slope_points"] = o.slope->points_used;
    }
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string pe_csv(const SimStats& s) {
    std::ostringstream out;
    out << "snr_db,trials,errors,pe,ci_lo,ci_hi\n";
    for (const PointStats& p : s.points)
        out << format_double(p.snr_db) << ',' << p.trials << ',' << p.errors << ','
            << format_double(p.pe) << ',' << format_double(p.ci_lo) << ','
            << format_double(p.ci_hi) << '\n';
    return out.str();
}

std::string outage_csv(const OutageResult& o) {
    std::ostringstream out;
    out << "snr_db,trials,errors,pe,ci_lo,ci_hi\n";
    for (const OutagePoint& p : o.points) {
        const double errors = p.p * static_cast<double>(p.trials);
        out << format_double(p.snr_db) << ',' << p.trials << ',' << format_double(errors) << ','
            << format_double(p.p) << ',' << format_double(p.ci_lo) << ','
            << format_double(p.ci_hi) << '\n';
    }
    return out.str();
}

std::vector<std::pair<double, double>> read_snr_pe_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file " + path.string());
    std::vector<std::pair<double, double>> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // mandatory header row
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 4) throw ConfigError("CSV row with fewer than 4 columns");
        out.emplace_back(std::stod(fields[0]), std::stod(fields[3]));
    }
    if (out.empty()) throw ConfigError("CSV file contains no data rows");
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write to " + tmp.string());
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace stbclab
