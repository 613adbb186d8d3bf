#pragma once

#include <cstdint>
#include <string_view>

#include "atiyah4/certificates.hpp"
#include "atiyah4/rng.hpp"

namespace atiyah4 {

enum class SampleCase { non_coplanar, coplanar_hull, collinear, any };
const char* to_string(SampleCase c);
std::optional<SampleCase> sample_case_from_string(std::string_view s);

// Deterministic sampling plan: (seed, index) fully determines each sample.
// `any` cycles through the three concrete cases by index mod 3.
struct SampleSpec {
    std::uint64_t seed = 0;
    std::uint64_t count = 100;
    SampleCase kind = SampleCase::non_coplanar;
    double r_max = 0.999;
    double min_sep = 1e-6;
};

// Rejection-samples one configuration of the requested case and self-checks
// the case postcondition (non-coplanarity; coplanarity + hull membership of
// the fourth point; shared geodesic). Throws SamplingError after 10^4 tries.
Configuration sample(const SampleSpec& spec, std::uint64_t index, const Tolerances& tol = {});

// Haar-ish random rotation (quaternion from gaussians) with a uniform
// translation center of norm <= max_center_norm.
BallIsometry random_isometry(Rng& rng, double max_center_norm = 0.8);

struct SampleRecord {
    std::uint64_t index;
    Configuration config;
    double measure;
    double residual;
    ScenarioTag scenario;
    bool singular;
    std::optional<CertificateReport> certificate;
};

struct BatchOptions {
    bool certificates = true;
    int threads = 1;
};

struct BatchSummary {
    std::uint64_t count = 0;
    double min_measure = 1.0;
    std::uint64_t argmin_index = 0;
    double mean_measure = 0.0;
    double min_residual = 1.0;
    std::array<std::uint64_t, 3> scenario_counts{};  // three_distinct, double_root, triple_root
    std::vector<std::uint64_t> failures;             // singular sample indices
    std::uint64_t incidence_failures = 0;            // certified non-coplanar audits that failed
    std::vector<double> histogram_edges;             // measure bin edges, first bin [0, 1e-12)
    std::vector<std::uint64_t> histogram;
};

struct BatchResult {
    std::vector<SampleRecord> records;  // in index order
    BatchSummary summary;
};

BatchResult batch_verify(const SampleSpec& spec, const BatchOptions& opts = {},
                         const Tolerances& tol = {});

struct SearchOptions {
    std::uint64_t seed = 0;
    int restarts = 10;
    int iterations = 200;
    int threads = 1;
};

struct SearchResult {
    Configuration best;
    double best_measure;
    std::vector<double> trace;  // best objective after each iteration of the best restart
    int best_restart;
    int restarts;
    std::uint64_t evaluations;
    double wall_seconds;  // excluded from determinism guarantees
};

// Nelder-Mead descent on the independence measure over 12 unconstrained
// parameters (tanh radial map onto the ball), with barrier penalties for
// separation and radius violations. Deterministic per (seed, restart);
// restarts may run in parallel with identical results.
SearchResult minimize(const SearchOptions& opts, const Tolerances& tol = {});

}  // namespace atiyah4
