#include "atiyah4/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace atiyah4 {

namespace {

constexpr int kSampleBudget = 10000;

Vec3 random_unit(Rng& rng) {
    while (true) {
        const Vec3 v(rng.normal(), rng.normal(), rng.normal());
        const double n = v.norm();
        if (n > 1e-6) return v / n;
    }
}

Vec3 uniform_in_ball(Rng& rng, double radius) {
    while (true) {
        const Vec3 v(rng.uniform(-radius, radius), rng.uniform(-radius, radius),
                     rng.uniform(-radius, radius));
        if (v.norm() <= radius) return v;
    }
}

Eigen::Matrix3d random_rotation(Rng& rng) {
    // Quaternion from four gaussians.
    double q0 = rng.normal(), q1 = rng.normal(), q2 = rng.normal(), q3 = rng.normal();
    const double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= n;
    q1 /= n;
    q2 /= n;
    q3 /= n;
    Eigen::Matrix3d r;
    r << 1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2),
        2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1),
        2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2);
    return r;
}

bool separated(const std::array<BallPoint, 4>& pts, int upto, double min_sep) {
    for (int i = 0; i < upto; ++i)
        for (int j = i + 1; j < upto; ++j)
            if (hyperbolic_distance(pts[static_cast<std::size_t>(i)],
                                    pts[static_cast<std::size_t>(j)]) < min_sep)
                return false;
    return true;
}

std::optional<Configuration> try_non_coplanar(Rng& rng, const SampleSpec& spec,
                                              const Tolerances& tol) {
    std::array<BallPoint, 4> pts;
    for (int k = 0; k < 4; ++k) pts[static_cast<std::size_t>(k)] = BallPoint(uniform_in_ball(rng, spec.r_max));
    if (!separated(pts, 4, spec.min_sep)) return std::nullopt;
    Configuration config = Configuration::make(pts, tol);
    if (coplanarity_test(config, tol).is_coplanar) return std::nullopt;
    return config;
}

std::optional<Configuration> try_coplanar_hull(Rng& rng, const SampleSpec& spec,
                                               const Tolerances& tol) {
    const double zeta = rng.uniform(0.0, 0.7);
    const Vec3 n = random_unit(rng);
    Vec3 b1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
    Vec3 b2 = n.cross(b1);

    std::array<BallPoint, 4> pts;
    if (zeta < 1e-3) {
        // Plane through the origin.
        for (int k = 0; k < 3; ++k) {
            const double rr = spec.r_max * std::sqrt(rng.next_double());
            const double phi = rng.uniform(0.0, 2.0 * M_PI);
            pts[static_cast<std::size_t>(k)] =
                BallPoint(rr * (std::cos(phi) * b1 + std::sin(phi) * b2));
        }
    } else {
        // Orthogonal sphere: |c| = (zeta + 1/zeta)/2, r = (1/zeta - zeta)/2,
        // points x = c + r w with w on the in-ball cap.
        const double cn = (zeta + 1.0 / zeta) / 2.0;
        const double r = (1.0 / zeta - zeta) / 2.0;
        const Vec3 c = cn * n;
        const double w_max = (spec.r_max * spec.r_max - 1.0 - 2.0 * r * r) / (2.0 * r * cn);
        if (w_max <= -1.0 + 1e-9) return std::nullopt;  // plane misses the r_max ball
        for (int k = 0; k < 3; ++k) {
            const double w = rng.uniform(-1.0, w_max);
            const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
            const double phi = rng.uniform(0.0, 2.0 * M_PI);
            const Vec3 omega = w * n + s * (std::cos(phi) * b1 + std::sin(phi) * b2);
            pts[static_cast<std::size_t>(k)] = BallPoint(c + r * omega);
        }
    }
    if (!separated(pts, 3, spec.min_sep)) return std::nullopt;

    // Chart of the sampled plane at x1: the translated images y2, y3 span a
    // diametral plane.
    const Vec3 x1 = pts[0].coords();
    const Vec3 y2 = mobius_translate(x1, pts[1].coords());
    const Vec3 y3 = mobius_translate(x1, pts[2].coords());
    const Vec3 nn = y2.cross(y3);
    if (nn.norm() < 1e-10) return std::nullopt;  // collinear triple
    const Vec3 pn = nn / nn.norm();
    Vec3 c1 = (std::abs(pn.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(pn).normalized();
    Vec3 c2 = pn.cross(c1);

    const Vec2 k1 = Vec2::Zero();
    const Vec2 k2 = poincare_to_klein(Vec2(y2.dot(c1), y2.dot(c2)));
    const Vec2 k3 = poincare_to_klein(Vec2(y3.dot(c1), y3.dot(c2)));
    const double area = std::abs(k2.x() * k3.y() - k2.y() * k3.x()) / 2.0;
    if (area < 1e-4) return std::nullopt;  // too thin for a stable interior sample

    // Uniform barycentric point of the Klein triangle.
    double u = rng.next_double(), v = rng.next_double();
    if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    const Vec2 k4 = (1.0 - u - v) * k1 + u * k2 + v * k3;
    const Vec2 p4 = klein_to_poincare(k4);
    const Vec3 y4 = p4.x() * c1 + p4.y() * c2;
    const Vec3 x4 = mobius_translate(-x1, y4);
    if (x4.norm() > spec.r_max) return std::nullopt;
    pts[3] = BallPoint(x4);
    if (!separated(pts, 4, spec.min_sep)) return std::nullopt;

    Configuration config = Configuration::make(pts, tol);
    if (!coplanarity_test(config, tol).is_coplanar) return std::nullopt;
    if (hull_membership(config, tol) != std::optional<int>(3)) return std::nullopt;
    return config;
}

std::optional<Configuration> try_collinear(Rng& rng, const SampleSpec& spec,
                                           const Tolerances& tol) {
    const BallIsometry g(random_rotation(rng), BallPoint(uniform_in_ball(rng, 0.3)));
    std::array<double, 4> s;
    for (double& v : s) v = rng.uniform(-0.6, 0.6);
    std::sort(s.begin(), s.end());

    std::array<BallPoint, 4> pts;
    for (int k = 0; k < 4; ++k)
        pts[static_cast<std::size_t>(k)] = g(BallPoint(s[static_cast<std::size_t>(k)], 0.0, 0.0));
    for (const auto& p : pts)
        if (p.norm() > spec.r_max) return std::nullopt;
    if (!separated(pts, 4, spec.min_sep)) return std::nullopt;

    Configuration config = Configuration::make(pts, tol);
    // Shared geodesic: the root system takes exactly two projective values.
    const RootSystem rs = root_system(config, tol);
    std::vector<ProjPoint> distinct;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            bool seen = false;
            for (const auto& d : distinct)
                if (proj_equal(rs.root(i, j), d, 1e-6)) seen = true;
            if (!seen) distinct.push_back(rs.root(i, j));
        }
    }
    if (distinct.size() != 2) return std::nullopt;
    return config;
}

}  // namespace

const char* to_string(SampleCase c) {
    switch (c) {
        case SampleCase::non_coplanar: return "non-coplanar";
        case SampleCase::coplanar_hull: return "coplanar-hull";
        case SampleCase::collinear: return "collinear";
        case SampleCase::any: return "any";
    }
    return "unknown";
}

std::optional<SampleCase> sample_case_from_string(std::string_view s) {
    if (s == "non-coplanar") return SampleCase::non_coplanar;
    if (s == "coplanar-hull") return SampleCase::coplanar_hull;
    if (s == "collinear") return SampleCase::collinear;
    if (s == "any") return SampleCase::any;
    return std::nullopt;
}

Configuration sample(const SampleSpec& spec, std::uint64_t index, const Tolerances& tol) {
    Tolerances local = tol;
    local.r_max = spec.r_max;
    local.min_sep = spec.min_sep;

    SampleCase kind = spec.kind;
    if (kind == SampleCase::any) {
        switch (index % 3) {
            case 0: kind = SampleCase::non_coplanar; break;
            case 1: kind = SampleCase::coplanar_hull; break;
            default: kind = SampleCase::collinear; break;
        }
    }

    Rng rng(Rng::sub_seed(spec.seed, index));
    for (int attempt = 0; attempt < kSampleBudget; ++attempt) {
        std::optional<Configuration> config;
        switch (kind) {
            case SampleCase::non_coplanar: config = try_non_coplanar(rng, spec, local); break;
            case SampleCase::coplanar_hull: config = try_coplanar_hull(rng, spec, local); break;
            default: config = try_collinear(rng, spec, local); break;
        }
        if (config) return *config;
    }
    throw SamplingError(std::string("sample: rejection budget exceeded (case ") + to_string(kind) +
                        ", r_max " + std::to_string(spec.r_max) + ", min_sep " +
                        std::to_string(spec.min_sep) + ")");
}

BallIsometry random_isometry(Rng& rng, double max_center_norm) {
    return BallIsometry(random_rotation(rng), BallPoint(uniform_in_ball(rng, max_center_norm)));
}

BatchResult batch_verify(const SampleSpec& spec, const BatchOptions& opts, const Tolerances& tol) {
    const std::uint64_t n = spec.count;
    std::vector<std::optional<SampleRecord>> slots(n);

    const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            Configuration config = sample(spec, i, tol);
            const AtiyahMatrix m = atiyah_matrix(config, tol);
            const double measure = independence_measure(m);
            const NullvectorResult nv = relation_nullvector(m);
            const Scenario sc = classify_scenario(nv.c, tol);
            SampleRecord rec{i,
                             config,
                             measure,
                             nv.residual,
                             sc.tag,
                             nv.residual < tol.singular_residual && measure < tol.singular_measure,
                             std::nullopt};
            if (opts.certificates) rec.certificate = certify(config, tol);
            slots[i] = std::move(rec);
        }
    };

    const int threads = std::max(1, opts.threads);
    if (threads == 1 || n < 2) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (n + static_cast<std::uint64_t>(threads) - 1) /
                                    static_cast<std::uint64_t>(threads);
        for (int t = 0; t < threads; ++t) {
            const std::uint64_t b = static_cast<std::uint64_t>(t) * chunk;
            const std::uint64_t e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    BatchResult out;
    out.records.reserve(n);
    BatchSummary& s = out.summary;
    s.count = n;
    s.histogram_edges.push_back(0.0);
    for (int k = 0; k <= 24; ++k) s.histogram_edges.push_back(std::pow(10.0, -12.0 + 0.5 * k));
    s.histogram.assign(s.histogram_edges.size() - 1, 0);

    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        SampleRecord& rec = *slots[i];
        sum += rec.measure;
        if (rec.measure < s.min_measure) {
            s.min_measure = rec.measure;
            s.argmin_index = i;
        }
        s.min_residual = std::min(s.min_residual, rec.residual);
        ++s.scenario_counts[static_cast<std::size_t>(rec.scenario)];
        if (rec.singular) s.failures.push_back(i);
        if (rec.certificate && rec.certificate->incidence.applicable &&
            !rec.certificate->incidence.all_ok)
            ++s.incidence_failures;

        std::size_t bin = s.histogram.size() - 1;
        for (std::size_t k = 0; k + 1 < s.histogram_edges.size(); ++k) {
            if (rec.measure < s.histogram_edges[k + 1]) {
                bin = k;
                break;
            }
        }
        ++s.histogram[bin];
        out.records.push_back(std::move(rec));
    }
    s.mean_measure = n > 0 ? sum / static_cast<double>(n) : 0.0;
    return out;
}

namespace {

struct Objective {
    const Tolerances& tol;
    Tolerances eval_tol;
    std::uint64_t evaluations = 0;

    explicit Objective(const Tolerances& t) : tol(t), eval_tol(t) {
        eval_tol.min_sep = 1e-13;  // endpoints stay defined; the barrier handles separation
        eval_tol.r_max = 1.0;
    }

    static std::array<BallPoint, 4> map_to_ball(const std::array<double, 12>& y) {
        std::array<BallPoint, 4> pts;
        for (int k = 0; k < 4; ++k) {
            const Vec3 v(y[static_cast<std::size_t>(3 * k)], y[static_cast<std::size_t>(3 * k + 1)],
                         y[static_cast<std::size_t>(3 * k + 2)]);
            const double r = v.norm();
            const double f = r < 1e-8 ? 1.0 - r * r / 3.0 : std::tanh(r) / r;
            Vec3 x = f * v;
            const double n = x.norm();
            if (n > 1.0 - 1e-12) x *= (1.0 - 1e-12) / n;
            pts[static_cast<std::size_t>(k)] = BallPoint(x);
        }
        return pts;
    }

    double penalty(const std::array<BallPoint, 4>& pts) const {
        double pen = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double n = pts[static_cast<std::size_t>(i)].norm();
            if (n > tol.r_max) pen += (n - tol.r_max) / (1.0 - tol.r_max);
            for (int j = i + 1; j < 4; ++j) {
                const double d = hyperbolic_distance(pts[static_cast<std::size_t>(i)],
                                                     pts[static_cast<std::size_t>(j)]);
                if (d < tol.min_sep) pen += (tol.min_sep - d) / tol.min_sep;
            }
        }
        return pen;
    }

    bool valid(const std::array<BallPoint, 4>& pts) const {
        for (const auto& p : pts)
            if (p.norm() > tol.r_max) return false;
        return separated(pts, 4, tol.min_sep);
    }

    double operator()(const std::array<double, 12>& y, std::array<BallPoint, 4>* pts_out,
                      bool* valid_out) {
        ++evaluations;
        auto pts = map_to_ball(y);
        // Gauge-fix by translating x1 to the origin. Rank is Mobius-invariant,
        // so the zero set is unchanged, while boundary drift of the whole
        // configuration (a pure isometry direction) can no longer fake a
        // singular matrix through column collapse.
        const BallPoint anchor = pts[0];
        pts[0] = BallPoint();
        for (int k = 1; k < 4; ++k)
            pts[static_cast<std::size_t>(k)] = mobius_translate(anchor, pts[static_cast<std::size_t>(k)]);
        if (pts_out) *pts_out = pts;
        const double pen = penalty(pts);
        const bool ok = valid(pts);
        if (valid_out) *valid_out = ok;

        double eu_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                eu_min = std::min(eu_min, (pts[static_cast<std::size_t>(i)].coords() -
                                           pts[static_cast<std::size_t>(j)].coords())
                                              .norm());
        if (eu_min < 1e-12) return 1.0 + pen;  // endpoint construction undefined

        const Configuration config = Configuration::make(pts, eval_tol);
        return independence_measure(atiyah_matrix(config, eval_tol)) + pen;
    }
};

struct RestartResult {
    std::array<double, 12> best_y{};
    double best_valid_measure = std::numeric_limits<double>::infinity();
    std::optional<std::array<BallPoint, 4>> best_valid_pts;
    std::vector<double> trace;
    std::uint64_t evaluations = 0;
};

RestartResult run_restart(std::uint64_t seed, int restart, int iterations, const Tolerances& tol) {
    constexpr int kDim = 12;
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;

    Rng rng(Rng::sub_seed(seed, 0x6d696e00ULL + static_cast<std::uint64_t>(restart)));
    Objective obj(tol);
    RestartResult out;

    using Point = std::array<double, kDim>;
    std::array<Point, kDim + 1> xs;
    std::array<double, kDim + 1> fs;

    const auto eval = [&](const Point& y) {
        std::array<BallPoint, 4> pts;
        bool ok = false;
        const double f = obj(y, &pts, &ok);
        if (ok) {
            const double measure = f;  // penalty is zero for valid points
            if (measure < out.best_valid_measure) {
                out.best_valid_measure = measure;
                out.best_valid_pts = pts;
            }
        }
        return f;
    };

    for (int k = 0; k < kDim; ++k) xs[0][static_cast<std::size_t>(k)] = rng.uniform(-1.0, 1.0);
    for (int v = 1; v <= kDim; ++v) {
        xs[static_cast<std::size_t>(v)] = xs[0];
        xs[static_cast<std::size_t>(v)][static_cast<std::size_t>(v - 1)] += 0.25;
    }
    for (int v = 0; v <= kDim; ++v) fs[static_cast<std::size_t>(v)] = eval(xs[static_cast<std::size_t>(v)]);

    std::array<int, kDim + 1> order;
    const auto sort_simplex = [&] {
        for (int i = 0; i <= kDim; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return fs[static_cast<std::size_t>(a)] < fs[static_cast<std::size_t>(b)];
        });
        std::array<Point, kDim + 1> xs2;
        std::array<double, kDim + 1> fs2;
        for (int i = 0; i <= kDim; ++i) {
            xs2[static_cast<std::size_t>(i)] = xs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            fs2[static_cast<std::size_t>(i)] = fs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        }
        xs = xs2;
        fs = fs2;
    };

    const auto combine = [](const Point& a, const Point& b, double t) {
        Point p;
        for (int k = 0; k < kDim; ++k)
            p[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)] +
                                             t * (b[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(k)]);
        return p;
    };

    out.trace.reserve(static_cast<std::size_t>(iterations));
    for (int it = 0; it < iterations; ++it) {
        sort_simplex();
        Point centroid{};
        for (int v = 0; v < kDim; ++v)
            for (int k = 0; k < kDim; ++k)
                centroid[static_cast<std::size_t>(k)] +=
                    xs[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] / kDim;

        const Point reflected = combine(centroid, xs[kDim], -kAlpha);
        const double fr = eval(reflected);
        if (fr < fs[0]) {
            const Point expanded = combine(centroid, xs[kDim], -kAlpha * kGamma);
            const double fe = eval(expanded);
            if (fe < fr) {
                xs[kDim] = expanded;
                fs[kDim] = fe;
            } else {
                xs[kDim] = reflected;
                fs[kDim] = fr;
            }
        } else if (fr < fs[kDim - 1]) {
            xs[kDim] = reflected;
            fs[kDim] = fr;
        } else {
            const Point contracted = combine(centroid, xs[kDim], fr < fs[kDim] ? -kRho : kRho);
            const double fc = eval(contracted);
            if (fc < std::min(fr, fs[kDim])) {
                xs[kDim] = contracted;
                fs[kDim] = fc;
            } else {
                for (int v = 1; v <= kDim; ++v) {
                    xs[static_cast<std::size_t>(v)] = combine(xs[0], xs[static_cast<std::size_t>(v)], kSigma);
                    fs[static_cast<std::size_t>(v)] = eval(xs[static_cast<std::size_t>(v)]);
                }
            }
        }
        out.trace.push_back(*std::min_element(fs.begin(), fs.end()));
    }
    out.best_y = xs[0];
    out.evaluations = obj.evaluations;
    return out;
}

}  // namespace

SearchResult minimize(const SearchOptions& opts, const Tolerances& tol) {
    if (opts.restarts <= 0 || opts.iterations <= 0)
        throw InvalidInputError("minimize: budgets must be positive");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<RestartResult> results(static_cast<std::size_t>(opts.restarts));
    const auto worker = [&](int begin, int end) {
        for (int r = begin; r < end; ++r)
            results[static_cast<std::size_t>(r)] = run_restart(opts.seed, r, opts.iterations, tol);
    };
    const int threads = std::max(1, opts.threads);
    if (threads == 1 || opts.restarts == 1) {
        worker(0, opts.restarts);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (opts.restarts + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk;
            const int e = std::min(opts.restarts, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    int best = -1;
    std::uint64_t evals = 0;
    for (int r = 0; r < opts.restarts; ++r) {
        evals += results[static_cast<std::size_t>(r)].evaluations;
        if (!results[static_cast<std::size_t>(r)].best_valid_pts) continue;
        if (best < 0 || results[static_cast<std::size_t>(r)].best_valid_measure <
                            results[static_cast<std::size_t>(best)].best_valid_measure)
            best = r;
    }
    if (best < 0) throw SamplingError("minimize: no valid configuration encountered");

    const RestartResult& win = results[static_cast<std::size_t>(best)];
    SearchResult out{Configuration::make(*win.best_valid_pts, tol),
                     win.best_valid_measure,
                     win.trace,
                     best,
                     opts.restarts,
                     evals,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    return out;
}

}  // namespace atiyah4
