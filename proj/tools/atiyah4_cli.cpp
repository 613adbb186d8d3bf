// Command-line surface for the n=4 hyperbolic Atiyah construction: endpoint
// computation, matrix verification, certificate replay, seeded sampling and
// counterexample search. All output is machine-readable; exit codes are
// 0 = success/verified, 2 = verification failure, 3 = invalid input,
// 4 = internal consistency failure.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "atiyah4/json_io.hpp"

namespace {

using namespace atiyah4;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitConsistencyFailure = 4;

struct CliOptions {
    std::string input;
    std::string output;
    std::string format = "json";
    std::string sample_case = "non-coplanar";
    std::string relation;
    std::uint64_t seed = 0;
    std::uint64_t count = 100;
    int restarts = 10;
    int iterations = 200;
    int threads = 1;
    bool no_meta = false;
    bool certificates = true;
    double oracle_tol = 1e-9;
    Tolerances tol;
};

void add_tolerance_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--r-max", opt.tol.r_max, "Maximum Euclidean point norm");
    cmd->add_option("--min-sep", opt.tol.min_sep, "Minimum pairwise hyperbolic distance");
    cmd->add_option("--tol-coplanar", opt.tol.coplanar, "Coplanarity singular-value ratio");
    cmd->add_option("--tol-hull", opt.tol.hull, "Point-in-triangle signed-area slack");
    cmd->add_option("--tol-proj", opt.tol.proj, "Projective equality threshold");
    cmd->add_option("--tol-scenario", opt.tol.scenario, "Discriminant threshold for scenario a");
    cmd->add_option("--tol-root", opt.tol.root_cluster, "Root clustering distance");
    cmd->add_option("--tol-geo", opt.tol.geo, "Planar geometry margin");
    cmd->add_option("--tol-on-circle", opt.tol.on_circle, "Face-circle membership margin");
    cmd->add_option("--tol-residual", opt.tol.singular_residual, "Singularity residual threshold");
    cmd->add_option("--tol-measure", opt.tol.singular_measure, "Singularity measure threshold");
}

void add_io_flags(CLI::App* cmd, CliOptions& opt, bool with_input) {
    if (with_input)
        cmd->add_option("--input", opt.input,
                        "Configuration: file path, inline JSON, or - for stdin")
            ->required();
    cmd->add_option("--output", opt.output, "Output path (default: stdout)");
    cmd->add_option("--format", opt.format, "Output format: json, jsonl, csv")
        ->check(CLI::IsMember({"json", "jsonl", "csv"}));
    cmd->add_flag("--no-meta", opt.no_meta, "Omit volatile metadata (timestamps, wall-clock)");
}

Json meta_block(const CliOptions& opt, const std::string& command) {
    Json meta{{"command", command}, {"tolerances", opt.tol}};
    if (!opt.no_meta) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
        meta["timestamp"] = buf;
    }
    return meta;
}

int emit(const CliOptions& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return kExitOk;
    }
    std::ofstream out(opt.output);
    if (!out) {
        std::cerr << R"({"error": "cannot open output file"})" << '\n';
        return kExitInvalidInput;
    }
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return kExitOk;
}

int emit_json(const CliOptions& opt, Json j) {
    if (!json_all_finite(j)) {
        std::cerr << R"({"error": "non-finite value in output"})" << '\n';
        return kExitConsistencyFailure;
    }
    return emit(opt, j.dump(2));
}

int cmd_endpoints(const CliOptions& opt) {
    const Configuration config = read_configuration_source(opt.input, opt.tol);
    const RootSystem rs = root_system(config, opt.tol);
    Json list = Json::array();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            Json entry{{"i", i + 1}, {"j", j + 1}};
            entry["ideal"] = rs.ideal(i, j);
            entry["proj"] = rs.root(i, j);
            entry["t"] = rs.root(i, j).finite_affine()
                             ? complex_json(rs.root(i, j).affine())
                             : Json("inf");
            list.push_back(entry);
        }
    }
    return emit_json(opt, Json{{"meta", meta_block(opt, "endpoints")}, {"endpoints", list}});
}

int cmd_matrix(const CliOptions& opt) {
    const Configuration config = read_configuration_source(opt.input, opt.tol);
    const AtiyahMatrix m = atiyah_matrix(config, opt.tol);
    const NullvectorResult nv = relation_nullvector(m);
    Json j{{"meta", meta_block(opt, "matrix")},
           {"matrix", m},
           {"determinant", complex_json(m.m.determinant())},
           {"measure", independence_measure(m)},
           {"residual", nv.residual},
           {"relation", nv.c},
           {"scenario", to_string(classify_scenario(nv.c, opt.tol).tag)}};
    return emit_json(opt, j);
}

int cmd_verify(const CliOptions& opt) {
    const Configuration config = read_configuration_source(opt.input, opt.tol);
    const AtiyahMatrix m = atiyah_matrix(config, opt.tol);
    const double measure = independence_measure(m);
    const NullvectorResult nv = relation_nullvector(m);
    const bool singular =
        nv.residual < opt.tol.singular_residual && measure < opt.tol.singular_measure;
    Json j{{"meta", meta_block(opt, "verify")},
           {"measure", measure},
           {"residual", nv.residual},
           {"verified", !singular}};
    const int rc = emit_json(opt, j);
    if (rc != kExitOk) return rc;
    return singular ? kExitVerificationFailure : kExitOk;
}

int cmd_classify(const CliOptions& opt) {
    const Configuration config = read_configuration_source(opt.input, opt.tol);
    Json j{{"meta", meta_block(opt, "classify")},
           {"coplanarity", coplanarity_test(config, opt.tol)},
           {"signature", type_signature(config, opt.tol)},
           {"incidence", incidence_audit(config, opt.tol)}};
    return emit_json(opt, j);
}

int cmd_certify(const CliOptions& opt) {
    const Configuration config = read_configuration_source(opt.input, opt.tol);
    std::optional<RelationVector> planted;
    if (!opt.relation.empty()) {
        try {
            planted = read_relation(Json::parse(opt.relation));
        } catch (const Json::parse_error& e) {
            throw InvalidInputError(std::string("relation is not valid JSON: ") + e.what());
        }
    }
    const CertificateReport report = certify(config, opt.tol, planted);
    return emit_json(opt, Json{{"meta", meta_block(opt, "certify")}, {"certificate", report}});
}

SampleSpec make_spec(const CliOptions& opt) {
    const auto kind = sample_case_from_string(opt.sample_case);
    if (!kind) throw InvalidInputError("unknown sample case: " + opt.sample_case);
    return SampleSpec{opt.seed, opt.count, *kind, opt.tol.r_max, opt.tol.min_sep};
}

int cmd_sample(const CliOptions& opt) {
    const SampleSpec spec = make_spec(opt);
    if (opt.format == "csv") throw InvalidInputError("csv output is only available for batch");
    if (opt.format == "jsonl") {
        std::ostringstream lines;
        for (std::uint64_t i = 0; i < spec.count; ++i) {
            Json j = sample(spec, i, opt.tol);
            j["index"] = i;
            if (!json_all_finite(j)) return kExitConsistencyFailure;
            lines << j.dump() << '\n';
        }
        return emit(opt, lines.str());
    }
    Json configs = Json::array();
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        Json j = sample(spec, i, opt.tol);
        j["index"] = i;
        configs.push_back(j);
    }
    return emit_json(opt, Json{{"meta", meta_block(opt, "sample")}, {"samples", configs}});
}

int cmd_batch(const CliOptions& opt) {
    const SampleSpec spec = make_spec(opt);
    const BatchResult result = batch_verify(spec, BatchOptions{opt.certificates, opt.threads}, opt.tol);

    int rc;
    if (opt.format == "csv") {
        std::ostringstream csv;
        csv << "bin_lo,bin_hi,count\n";
        for (std::size_t k = 0; k < result.summary.histogram.size(); ++k)
            csv << result.summary.histogram_edges[k] << ',' << result.summary.histogram_edges[k + 1]
                << ',' << result.summary.histogram[k] << '\n';
        rc = emit(opt, csv.str());
    } else if (opt.format == "jsonl") {
        std::ostringstream lines;
        for (const auto& rec : result.records) {
            const Json j = rec;
            if (!json_all_finite(j)) return kExitConsistencyFailure;
            lines << j.dump() << '\n';
        }
        Json tail{{"summary", result.summary}, {"meta", meta_block(opt, "batch")}};
        if (!json_all_finite(tail)) return kExitConsistencyFailure;
        lines << tail.dump() << '\n';
        rc = emit(opt, lines.str());
    } else {
        Json j{{"meta", meta_block(opt, "batch")},
               {"summary", result.summary},
               {"records", result.records}};
        rc = emit_json(opt, j);
    }
    if (rc != kExitOk) return rc;
    return result.summary.failures.empty() ? kExitOk : kExitVerificationFailure;
}

int cmd_minimize(const CliOptions& opt) {
    const SearchResult result =
        minimize(SearchOptions{opt.seed, opt.restarts, opt.iterations, opt.threads}, opt.tol);
    Json j{{"meta", meta_block(opt, "minimize")}, {"search", result}};
    if (!opt.no_meta) j["search"]["wall_seconds"] = result.wall_seconds;
    return emit_json(opt, j);
}

int cmd_oracle(const CliOptions& opt) {
    double max_dev = 0.0;
    std::uint64_t pairs = 0;
    if (!opt.input.empty()) {
        const Configuration config = read_configuration_source(opt.input, opt.tol);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                const IdealPoint a = ideal_endpoint(config.point(i), config.point(j), opt.tol);
                const IdealPoint b = endpoint_oracle(config.point(i), config.point(j), opt.tol);
                max_dev = std::max(max_dev, (a.coords() - b.coords()).norm());
                ++pairs;
            }
        }
    } else {
        Rng rng(opt.seed);
        Tolerances tol = opt.tol;
        tol.min_sep = std::max(tol.min_sep, 1e-4);
        while (pairs < opt.count) {
            const Vec3 x(rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99));
            const Vec3 y(rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99));
            if (x.norm() > 0.99 || y.norm() > 0.99) continue;
            const BallPoint bx(x), by(y);
            if (hyperbolic_distance(bx, by) < tol.min_sep) continue;
            const IdealPoint a = ideal_endpoint(bx, by, tol);
            const IdealPoint b = endpoint_oracle(bx, by, tol);
            max_dev = std::max(max_dev, (a.coords() - b.coords()).norm());
            ++pairs;
        }
    }
    const bool ok = max_dev < opt.oracle_tol;
    Json j{{"meta", meta_block(opt, "oracle")},
           {"pairs", pairs},
           {"max_deviation", max_dev},
           {"tolerance", opt.oracle_tol},
           {"agree", ok}};
    const int rc = emit_json(opt, j);
    if (rc != kExitOk) return rc;
    return ok ? kExitOk : kExitConsistencyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic Atiyah construction for four points: verification and certificates"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* endpoints = app.add_subcommand("endpoints", "Print the twelve ideal endpoints t_ij");
    add_io_flags(endpoints, opt, true);
    add_tolerance_flags(endpoints, opt);

    CLI::App* matrix = app.add_subcommand("matrix", "Print the 4x4 coefficient matrix and its rank data");
    add_io_flags(matrix, opt, true);
    add_tolerance_flags(matrix, opt);

    CLI::App* verify = app.add_subcommand("verify", "Check linear independence against thresholds");
    add_io_flags(verify, opt, true);
    add_tolerance_flags(verify, opt);

    CLI::App* classify = app.add_subcommand("classify", "Type signature and face-circle incidence audit");
    add_io_flags(classify, opt, true);
    add_tolerance_flags(classify, opt);

    CLI::App* certify = app.add_subcommand("certify", "Full certificate report");
    add_io_flags(certify, opt, true);
    add_tolerance_flags(certify, opt);
    certify->add_option("--relation", opt.relation,
                        "Planted relation [[re,im] x4] for scenario replay");

    CLI::App* sample_cmd = app.add_subcommand("sample", "Seeded configuration sampling");
    add_io_flags(sample_cmd, opt, false);
    add_tolerance_flags(sample_cmd, opt);
    sample_cmd->add_option("--seed", opt.seed, "Sampling seed");
    sample_cmd->add_option("--count", opt.count, "Number of samples");
    sample_cmd->add_option("--case", opt.sample_case,
                           "non-coplanar, coplanar-hull, collinear, or any");

    CLI::App* batch = app.add_subcommand("batch", "Sample and verify a batch");
    add_io_flags(batch, opt, false);
    add_tolerance_flags(batch, opt);
    batch->add_option("--seed", opt.seed, "Sampling seed");
    batch->add_option("--count", opt.count, "Number of samples");
    batch->add_option("--case", opt.sample_case, "non-coplanar, coplanar-hull, collinear, or any");
    batch->add_option("--threads", opt.threads, "Worker threads (results independent of the count)");
    batch->add_flag("!--no-certificates", opt.certificates, "Skip per-sample certificates");

    CLI::App* minimize_cmd = app.add_subcommand("minimize", "Search for low independence measures");
    add_io_flags(minimize_cmd, opt, false);
    add_tolerance_flags(minimize_cmd, opt);
    minimize_cmd->add_option("--seed", opt.seed, "Search seed");
    minimize_cmd->add_option("--restarts", opt.restarts, "Independent restarts");
    minimize_cmd->add_option("--iterations", opt.iterations, "Simplex iterations per restart");
    minimize_cmd->add_option("--threads", opt.threads, "Worker threads");

    CLI::App* oracle = app.add_subcommand("oracle", "Cross-check endpoint construction");
    add_io_flags(oracle, opt, false);
    add_tolerance_flags(oracle, opt);
    oracle->add_option("--input", opt.input, "Configuration to check (otherwise random pairs)");
    oracle->add_option("--seed", opt.seed, "Seed for random pairs");
    oracle->add_option("--count", opt.count, "Number of random pairs");
    oracle->add_option("--tol-oracle", opt.oracle_tol, "Maximum allowed deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (endpoints->parsed()) return cmd_endpoints(opt);
        if (matrix->parsed()) return cmd_matrix(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (certify->parsed()) return cmd_certify(opt);
        if (sample_cmd->parsed()) return cmd_sample(opt);
        if (batch->parsed()) return cmd_batch(opt);
        if (minimize_cmd->parsed()) return cmd_minimize(opt);
        if (oracle->parsed()) return cmd_oracle(opt);
    } catch (const ConsistencyError& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << '\n';
        return kExitConsistencyFailure;
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << '\n';
        return kExitConsistencyFailure;
    }
    return kExitInvalidInput;
}
