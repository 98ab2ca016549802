#include "bdsec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bdsec {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json coupling_to_json(const CouplingMatrix& omega) {
    omega.validate();
    return json{{"rows", omega.rows}, {"cols", omega.cols}, {"entries", omega.entries}};
}

CouplingMatrix coupling_from_json(const json& j) {
    const auto errs = validate_schema(j, coupling_schema());
    if (!errs.empty()) throw std::invalid_argument("coupling: " + errs.front());
    CouplingMatrix omega;
    omega.rows = j.at("rows").get<int>();
    omega.cols = j.at("cols").get<int>();
    omega.entries = j.at("entries").get<std::vector<double>>();
    if (static_cast<int>(omega.entries.size()) != omega.rows * omega.cols)
        throw std::invalid_argument("coupling: entries length != rows*cols");
    omega.validate();
    return omega;
}

json rate_report_to_json(const RateReport& r) {
    return json{{"per_user_rate", r.per_user_rate},
                {"per_user_eve_bound", r.per_user_eve_bound},
                {"per_user_eve_mc", r.per_user_eve_mc},
                {"per_user_rate_se", r.per_user_rate_se},
                {"per_user_eve_mc_se", r.per_user_eve_mc_se},
                {"secrecy_sum_rate_lb", r.secrecy_sum_rate_lb},
                {"secrecy_sum_rate_mc", r.secrecy_sum_rate_mc},
                {"secrecy_lb_se", r.secrecy_lb_se},
                {"secrecy_mc_se", r.secrecy_mc_se}};
}

std::string rate_report_csv_header() {
    return "snr_db,k,R_k,C_ub_k,C_mc_k,R_sec_lb,R_sec_mc,se_R_k,se_C_mc_k,se_lb,se_mc";
}

std::vector<std::string> rate_report_csv_rows(double snr_db, const RateReport& r) {
    std::vector<std::string> rows;
    for (std::size_t k = 0; k < r.per_user_rate.size(); ++k) {
        std::ostringstream os;
        os << fmt17(snr_db) << ',' << k << ',' << fmt17(r.per_user_rate[k]) << ','
           << fmt17(r.per_user_eve_bound[k]) << ',' << fmt17(r.per_user_eve_mc[k]) << ','
           << fmt17(r.secrecy_sum_rate_lb) << ',' << fmt17(r.secrecy_sum_rate_mc) << ','
           << fmt17(r.per_user_rate_se[k]) << ',' << fmt17(r.per_user_eve_mc_se[k]) << ','
           << fmt17(r.secrecy_lb_se) << ',' << fmt17(r.secrecy_mc_se);
        rows.push_back(os.str());
    }
    return rows;
}

std::string trace_csv_header() {
    return "loop,iteration,objective_bits,kkt_residual_max,power_used,mu";
}

std::string trace_csv_row(const TraceRow& row) {
    std::ostringstream os;
    os << row.loop << ',' << row.iteration << ',' << fmt17(row.objective_bits) << ','
       << fmt17(row.kkt_residual) << ',' << fmt17(row.power_used) << ',' << fmt17(row.mu);
    return os.str();
}

namespace {

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

}  // namespace

std::vector<std::string> validate_schema(const json& instance, const json& schema,
                                         const std::string& path) {
    std::vector<std::string> errors;
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(instance, t.get<std::string>());
        } else {
            for (const auto& alt : t)
                if (type_matches(instance, alt.get<std::string>())) ok = true;
        }
        if (!ok) {
            errors.push_back(path + ": expected type " + t.dump() + ", got " +
                             std::string(instance.type_name()));
            return errors;  // further checks would be meaningless
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& v : schema["enum"])
            if (v == instance) found = true;
        if (!found) errors.push_back(path + ": value " + instance.dump() + " not in enum");
    }
    if (instance.is_number()) {
        const double v = instance.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            errors.push_back(path + ": " + fmt17(v) + " below minimum");
        if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
            errors.push_back(path + ": " + fmt17(v) + " not above exclusive minimum");
        if (schema.contains("maximum") && v > schema["maximum"].get<double>())
            errors.push_back(path + ": " + fmt17(v) + " above maximum");
    }
    if (instance.is_object()) {
        if (schema.contains("required"))
            for (const auto& req : schema["required"]) {
                const std::string name = req.get<std::string>();
                if (!instance.contains(name))
                    errors.push_back(path + ": missing required field '" + name + "'");
            }
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (instance.contains(it.key())) {
                    auto sub = validate_schema(instance[it.key()], it.value(),
                                               path + "." + it.key());
                    errors.insert(errors.end(), sub.begin(), sub.end());
                }
    }
    if (instance.is_array()) {
        if (schema.contains("minItems") &&
            instance.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(path + ": fewer than " + schema["minItems"].dump() + " items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < instance.size(); ++i) {
                auto sub = validate_schema(instance[i], schema["items"],
                                           path + "[" + std::to_string(i) + "]");
                errors.insert(errors.end(), sub.begin(), sub.end());
            }
    }
    return errors;
}

const json& coupling_schema() {
    static const json s = {
        {"$id", "bdsec/coupling/v1"},
        {"type", "object"},
        {"required", {"rows", "cols", "entries"}},
        {"properties",
         {{"rows", {{"type", "integer"}, {"minimum", 1}}},
          {"cols", {{"type", "integer"}, {"minimum", 1}}},
          {"entries", {{"type", "array"}, {"items", {{"type", "number"}, {"minimum", 0}}}}}}}};
    return s;
}

const json& scenario_schema() {
    static const json s = {
        {"$id", "bdsec/scenario/v1"},
        {"type", "object"},
        {"required", {"dims", "coupling", "snr_db"}},
        {"properties",
         {{"dims",
           {{"type", "object"},
            {"required", {"M", "K", "N_r", "N_e"}},
            {"properties",
             {{"M", {{"type", "integer"}, {"minimum", 1}}},
              {"K", {{"type", "integer"}, {"minimum", 1}}},
              {"N_r", {{"type", "integer"}, {"minimum", 1}}},
              {"N_e", {{"type", "integer"}, {"minimum", 1}}}}}}},
          {"coupling",
           {{"type", "object"},
            {"properties",
             {{"profile",
               {{"type", "object"},
                {"required", {"kind"}},
                {"properties",
                 {{"kind",
                   {{"type", "string"},
                    {"enum", {"uniform", "exponential-cluster", "sparse-beams"}}}},
                  {"cluster_width", {{"type", "number"}, {"minimum", 0}}},
                  {"floor", {{"type", "number"}, {"minimum", 0}}},
                  {"support_size", {{"type", "integer"}, {"minimum", 0}}},
                  {"support", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 0}}}}},
                  {"seed", {{"type", "integer"}, {"minimum", 0}}}}}}},
              {"files",
               {{"type", "object"},
                {"required", {"users", "eve"}},
                {"properties",
                 {{"users", {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "string"}}}}},
                  {"eve", {{"type", "string"}}}}}}},
              {"eve_zero", {{"type", "boolean"}}}}}}},
          {"snr_db", {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "number"}}}}},
          {"solver",
           {{"type", "object"},
            {"properties",
             {{"xi1", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"xi2", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"xi3", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"xi4_rel", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"xi5", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"kkt_tol", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"cccp_max_iter", {{"type", "integer"}, {"minimum", 1}}},
              {"iwfa_max_sweeps", {{"type", "integer"}, {"minimum", 1}}},
              {"strongest_beams", {{"type", "integer"}, {"minimum", 1}}},
              {"init", {{"type", "string"}, {"enum", {"strongest-beams", "uniform"}}}}}}}},
          {"mc_samples", {{"type", "integer"}, {"minimum", 1}}},
          {"seed", {{"type", "integer"}, {"minimum", 0}}},
          {"workers", {{"type", "integer"}, {"minimum", 1}}},
          {"outputs",
           {{"type", "object"},
            {"properties",
             {{"dir", {{"type", "string"}}},
              {"format", {{"type", "string"}, {"enum", {"csv", "json"}}}}}}}},
          {"bench_grid",
           {{"type", "array"},
            {"items",
             {{"type", "array"}, {"minItems", 2}, {"items", {{"type", "integer"}, {"minimum", 1}}}}}}}}}};
    return s;
}

const json& verify_report_schema() {
    static const json s = {
        {"$id", "bdsec/verify-report/v1"},
        {"type", "object"},
        {"required", {"all_pass", "suites"}},
        {"properties",
         {{"all_pass", {{"type", "boolean"}}},
          {"suites",
           {{"type", "array"},
            {"minItems", 1},
            {"items",
             {{"type", "object"},
              {"required", {"name", "pass"}},
              {"properties",
               {{"name", {{"type", "string"}}},
                {"pass", {{"type", "boolean"}}},
                {"details", {{"type", "object"}}}}}}}}}}}};
    return s;
}

void ScenarioConfig::validate() const {
    dims.validate();
    if (snr_db.empty()) throw std::invalid_argument("snr_db: grid must be nonempty");
    if (mc_samples < 1) throw std::invalid_argument("mc_samples: must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers: must be >= 1");
    solver.validate();
    for (double s : snr_db)
        if (!std::isfinite(s)) throw std::invalid_argument("snr_db: entries must be finite");
}

ScenarioConfig scenario_from_json(const json& j) {
    const auto errs = validate_schema(j, scenario_schema());
    if (!errs.empty()) {
        std::string msg = "config schema violations:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
    ScenarioConfig cfg;
    const auto& d = j.at("dims");
    cfg.dims.M = d.at("M").get<int>();
    cfg.dims.K = d.at("K").get<int>();
    cfg.dims.N_r = d.at("N_r").get<int>();
    cfg.dims.N_e = d.at("N_e").get<int>();

    const auto& c = j.at("coupling");
    if (c.contains("files")) {
        cfg.coupling.from_files = true;
        cfg.coupling.user_files = c["files"].at("users").get<std::vector<std::string>>();
        cfg.coupling.eve_file = c["files"].at("eve").get<std::string>();
    } else if (c.contains("profile")) {
        const auto& p = c["profile"];
        cfg.coupling.profile.kind = profile_kind_from_string(p.at("kind").get<std::string>());
        cfg.coupling.profile.cluster_width = p.value("cluster_width", 0.0);
        cfg.coupling.profile.floor = p.value("floor", 0.0);
        cfg.coupling.profile.support_size = p.value("support_size", 0);
        if (p.contains("support")) cfg.coupling.profile.support = p["support"].get<std::vector<int>>();
        cfg.coupling.profile.seed = p.value("seed", std::uint64_t{0});
    } else {
        throw std::invalid_argument("coupling: needs either 'profile' or 'files'");
    }
    cfg.coupling.eve_zero = c.value("eve_zero", false);

    cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        cfg.solver.xi1 = s.value("xi1", cfg.solver.xi1);
        cfg.solver.xi2 = s.value("xi2", cfg.solver.xi2);
        cfg.solver.xi3 = s.value("xi3", cfg.solver.xi3);
        cfg.solver.xi4_rel = s.value("xi4_rel", cfg.solver.xi4_rel);
        cfg.solver.xi5 = s.value("xi5", cfg.solver.xi5);
        cfg.solver.kkt_tol = s.value("kkt_tol", cfg.solver.kkt_tol);
        cfg.solver.cccp_max_iter = s.value("cccp_max_iter", cfg.solver.cccp_max_iter);
        cfg.solver.iwfa_max_sweeps = s.value("iwfa_max_sweeps", cfg.solver.iwfa_max_sweeps);
        cfg.solver.strongest_beams = s.value("strongest_beams", cfg.solver.strongest_beams);
        if (s.value("init", std::string("strongest-beams")) == "uniform")
            cfg.solver.init = SolverConfig::Init::Uniform;
    }
    cfg.mc_samples = j.value("mc_samples", 2000);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.workers = j.value("workers", 1);
    if (j.contains("outputs")) {
        cfg.outputs.dir = j["outputs"].value("dir", std::string("."));
        cfg.outputs.format = j["outputs"].value("format", std::string("csv"));
    }
    if (j.contains("bench_grid"))
        for (const auto& cell : j["bench_grid"])
            cfg.bench_grid.emplace_back(cell[0].get<int>(), cell[1].get<int>());
    cfg.validate();
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json c;
    if (cfg.coupling.from_files) {
        c["files"] = {{"users", cfg.coupling.user_files}, {"eve", cfg.coupling.eve_file}};
    } else {
        c["profile"] = {{"kind", to_string(cfg.coupling.profile.kind)},
                        {"cluster_width", cfg.coupling.profile.cluster_width},
                        {"floor", cfg.coupling.profile.floor},
                        {"support_size", cfg.coupling.profile.support_size},
                        {"support", cfg.coupling.profile.support},
                        {"seed", cfg.coupling.profile.seed}};
    }
    c["eve_zero"] = cfg.coupling.eve_zero;
    json bench = json::array();
    for (const auto& [k, m] : cfg.bench_grid) bench.push_back(json::array({k, m}));
    return json{
        {"dims",
         {{"M", cfg.dims.M}, {"K", cfg.dims.K}, {"N_r", cfg.dims.N_r}, {"N_e", cfg.dims.N_e}}},
        {"coupling", c},
        {"snr_db", cfg.snr_db},
        {"solver",
         {{"xi1", cfg.solver.xi1},
          {"xi2", cfg.solver.xi2},
          {"xi3", cfg.solver.xi3},
          {"xi4_rel", cfg.solver.xi4_rel},
          {"xi5", cfg.solver.xi5},
          {"kkt_tol", cfg.solver.kkt_tol},
          {"cccp_max_iter", cfg.solver.cccp_max_iter},
          {"iwfa_max_sweeps", cfg.solver.iwfa_max_sweeps},
          {"strongest_beams", cfg.solver.strongest_beams},
          {"init",
           cfg.solver.init == SolverConfig::Init::Uniform ? "uniform" : "strongest-beams"}}},
        {"mc_samples", cfg.mc_samples},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
        {"outputs", {{"dir", cfg.outputs.dir}, {"format", cfg.outputs.format}}},
        {"bench_grid", bench}};
}

CouplingSet resolve_coupling(const ScenarioConfig& cfg) {
    CouplingSet set;
    if (cfg.coupling.from_files) {
        if (static_cast<int>(cfg.coupling.user_files.size()) != cfg.dims.K)
            throw std::invalid_argument("coupling.files.users: need exactly K paths");
        for (const auto& path : cfg.coupling.user_files) {
            CouplingMatrix omega = coupling_from_json(load_json_file(path));
            if (omega.rows != cfg.dims.N_r || omega.cols != cfg.dims.M)
                throw std::invalid_argument("coupling file " + path + ": dims mismatch");
            set.users.push_back(std::move(omega));
        }
        set.eve = coupling_from_json(load_json_file(cfg.coupling.eve_file));
        if (set.eve.rows != cfg.dims.N_e || set.eve.cols != cfg.dims.M)
            throw std::invalid_argument("coupling file " + cfg.coupling.eve_file +
                                        ": dims mismatch");
    } else {
        set = synth_coupling(cfg.dims, cfg.coupling.profile);
    }
    if (cfg.coupling.eve_zero)
        set.eve = CouplingMatrix(cfg.dims.N_e, cfg.dims.M, 0.0);
    return set;
}

std::string config_hash(const json& j) {
    const std::string canon = j.dump();  // nlohmann dumps objects with sorted keys
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace bdsec
