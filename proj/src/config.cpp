#include "zomirror/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zomirror {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

const json& require(const json& obj, const std::string& field, const std::string& scope) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(scope.empty() ? field : scope + "." + field, "missing");
    return *it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "must be a number");
    return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) fail(field, "must be an integer");
    return v.get<std::int64_t>();
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) fail(field, "must be a string");
    return v.get<std::string>();
}

Algorithm parse_algorithm(const std::string& name, const std::string& field) {
    if (name == "zo_expmd") return Algorithm::ZoExpMd;
    if (name == "zo_ada_expmd") return Algorithm::ZoAdaExpMd;
    if (name == "zo_psgd") return Algorithm::ZoPsgd;
    fail(field, "unknown algorithm '" + name + "' (zo_expmd | zo_ada_expmd | zo_psgd)");
}

ProblemSpec parse_problem(const json& j) {
    if (!j.is_object()) fail("problem", "must be an object");
    ProblemSpec p;
    const std::string kind = text(require(j, "kind", "problem"), "problem.kind");
    if (kind == "sparse_quadratic") {
        p.kind = ProblemSpec::Kind::SparseQuadratic;
        p.d = static_cast<std::size_t>(integer(require(j, "d", "problem"), "problem.d"));
        p.s = static_cast<std::size_t>(integer(require(j, "s", "problem"), "problem.s"));
        if (j.contains("noise_std")) p.noise_std = number(j["noise_std"], "problem.noise_std");
        if (j.contains("problem_seed"))
            p.problem_seed = static_cast<std::uint64_t>(integer(j["problem_seed"], "problem.problem_seed"));
        if (p.d < 3) fail("problem.d", "must be >= 3");
        if (p.s < 1 || p.s > p.d) fail("problem.s", "must satisfy 1 <= s <= d");
        if (p.noise_std < 0.0) fail("problem.noise_std", "must be nonnegative");
    } else if (kind == "explain") {
        p.kind = ProblemSpec::Kind::Explain;
        if (j.contains("classifier")) {
            const json& c = j["classifier"];
            if (!c.is_object()) fail("problem.classifier", "must be an object");
            if (c.contains("file")) {
                p.classifier_file = text(c["file"], "problem.classifier.file");
            } else {
                p.cls_input = static_cast<std::int32_t>(integer(require(c, "n", "problem.classifier"), "problem.classifier.n"));
                p.cls_hidden = static_cast<std::int32_t>(integer(require(c, "hidden", "problem.classifier"), "problem.classifier.hidden"));
                p.cls_classes = static_cast<std::int32_t>(integer(require(c, "classes", "problem.classifier"), "problem.classifier.classes"));
                p.cls_seed = static_cast<std::int32_t>(integer(require(c, "seed", "problem.classifier"), "problem.classifier.seed"));
            }
        }
        const std::string task = text(require(j, "task", "problem"), "problem.task");
        if (task == "pp")
            p.task = ExplainTask::Kind::PP;
        else if (task == "pn")
            p.task = ExplainTask::Kind::PN;
        else
            fail("problem.task", "must be 'pp' or 'pn'");
        if (j.contains("sample_seed"))
            p.sample_seed = static_cast<std::uint64_t>(integer(j["sample_seed"], "problem.sample_seed"));
        if (j.contains("kappa")) p.kappa = number(j["kappa"], "problem.kappa");
    } else {
        fail("problem.kind", "unknown kind '" + kind + "' (sparse_quadratic | explain)");
    }
    if (j.contains("gamma1")) p.gamma1 = number(j["gamma1"], "problem.gamma1");
    if (j.contains("gamma2")) p.gamma2 = number(j["gamma2"], "problem.gamma2");
    if (p.gamma1 < 0.0 || p.gamma2 < 0.0) fail("problem.gamma1/gamma2", "must be nonnegative");
    return p;
}

AlgorithmSpec parse_algorithm_spec(const json& j, const std::string& scope) {
    if (!j.is_object()) fail(scope, "must be an object");
    AlgorithmSpec a;
    a.algorithm = parse_algorithm(text(require(j, "name", scope), scope + ".name"), scope + ".name");
    a.iterations = static_cast<int>(integer(require(j, "T", scope), scope + ".T"));
    if (a.iterations < 1) fail(scope + ".T", "must be >= 1");
    a.batch = static_cast<int>(integer(require(j, "m", scope), scope + ".m"));
    if (a.batch < 1) fail(scope + ".m", "must be >= 1");
    if (j.contains("eta")) a.eta = number(j["eta"], scope + ".eta");
    if (j.contains("nu")) a.nu = number(j["nu"], scope + ".nu");
    if (a.algorithm == Algorithm::ZoAdaExpMd) {
        if (a.eta) fail(scope + ".eta", "zo_ada_expmd forbids a constant stepsize");
    } else if (!a.eta) {
        fail(scope + ".eta", "required for constant-stepsize algorithms");
    } else if (!(*a.eta > 0.0)) {
        fail(scope + ".eta", "must be positive");
    }
    if (a.nu && !(*a.nu > 0.0)) fail(scope + ".nu", "must be positive");
    return a;
}

}  // namespace

CompositeProblem ProblemSpec::build() const {
    const Regularizer reg =
        (gamma1 == 0.0 && gamma2 == 0.0) ? Regularizer::none() : Regularizer::elastic_net(gamma1, gamma2);
    if (kind == Kind::SparseQuadratic)
        return make_sparse_quadratic(d, s, noise_std, RngStream(problem_seed, 0x9d), reg);

    TinyClassifier model = classifier_file
                               ? TinyClassifier::load(*classifier_file)
                               : TinyClassifier::generate(cls_input, cls_hidden, cls_classes, cls_seed);
    ExplainTask t;
    t.kind = task;
    t.kappa = kappa;
    t.gamma1 = gamma1;
    t.gamma2 = gamma2;
    t.x0.resize(model.input_dim);
    RngStream rng(sample_seed, 0x5a);
    for (auto& v : t.x0) v = rng.uniform01();
    return make_explain_problem(t, model);
}

OptimizerConfig AlgorithmSpec::resolve(const CompositeProblem& problem, std::uint64_t seed,
                                       bool record_wallclock) const {
    OptimizerConfig cfg;
    cfg.algorithm = algorithm;
    cfg.iterations = iterations;
    cfg.eta_const = eta;
    cfg.seed = seed;
    cfg.record_wallclock = record_wallclock;
    cfg.estimator.scheme = scheme_of(algorithm);
    cfg.estimator.batch = batch;
    cfg.estimator.nu = nu.value_or(cfg.estimator.scheme == Scheme::Rademacher
                                       ? rademacher_nu_fixed_batch(problem.dim(), batch)
                                       : gaussian_nu_fixed_batch(problem.dim(), batch));
    return cfg;
}

std::string AlgorithmSpec::label() const {
    std::ostringstream out;
    out << algorithm_name(algorithm);
    if (eta) out << "_eta" << *eta;
    return out.str();
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path.string());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& body, const std::string& origin) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");

    ExperimentConfig cfg;
    cfg.problem = parse_problem(require(j, "problem", ""));

    const json& algs = require(j, "algorithms", "");
    if (!algs.is_array() || algs.empty()) fail("algorithms", "must be a non-empty array");
    for (std::size_t i = 0; i < algs.size(); ++i)
        cfg.algorithms.push_back(parse_algorithm_spec(algs[i], "algorithms[" + std::to_string(i) + "]"));

    const json& seeds = require(j, "seeds", "");
    if (!seeds.is_array() || seeds.empty()) fail("seeds", "must be a non-empty array");
    for (std::size_t i = 0; i < seeds.size(); ++i)
        cfg.seeds.push_back(static_cast<std::uint64_t>(integer(seeds[i], "seeds[" + std::to_string(i) + "]")));

    if (j.contains("output_dir")) cfg.output_dir = text(j["output_dir"], "output_dir");
    if (j.contains("report_norm")) {
        cfg.report_norm = text(j["report_norm"], "report_norm");
        if (cfg.report_norm != "l1" && cfg.report_norm != "l2" && cfg.report_norm != "both")
            fail("report_norm", "must be 'l1', 'l2' or 'both'");
    }
    if (j.contains("threads")) {
        cfg.threads = static_cast<int>(integer(j["threads"], "threads"));
        if (cfg.threads < 1) fail("threads", "must be >= 1");
    }
    return cfg;
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out.precision(17);
    out << "problem.kind=" << (problem.kind == ProblemSpec::Kind::SparseQuadratic ? "sparse_quadratic" : "explain");
    if (problem.kind == ProblemSpec::Kind::SparseQuadratic) {
        out << ";d=" << problem.d << ";s=" << problem.s << ";noise=" << problem.noise_std
            << ";pseed=" << problem.problem_seed;
    } else {
        out << ";cls=" << problem.cls_input << "x" << problem.cls_hidden << "x" << problem.cls_classes
            << "@" << problem.cls_seed;
        if (problem.classifier_file) out << ";file=" << *problem.classifier_file;
        out << ";task=" << (problem.task == ExplainTask::Kind::PP ? "pp" : "pn")
            << ";sseed=" << problem.sample_seed << ";kappa=" << problem.kappa;
    }
    out << ";g1=" << problem.gamma1 << ";g2=" << problem.gamma2;
    for (const auto& a : algorithms) {
        out << "|" << algorithm_name(a.algorithm) << ";T=" << a.iterations << ";m=" << a.batch;
        if (a.eta) out << ";eta=" << *a.eta;
        if (a.nu) out << ";nu=" << *a.nu;
    }
    out << "|seeds=";
    for (auto s : seeds) out << s << ",";
    out << "|norm=" << report_norm;
    return out.str();
}

}  // namespace zomirror
