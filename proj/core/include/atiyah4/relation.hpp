#pragma once

#include <array>

#include "atiyah4/sphere.hpp"

namespace atiyah4 {

using Vec4c = Eigen::Vector4cd;

// Multihomogeneous elementary symmetric polynomials of three CP^1 points:
// sigma_k = sum over k-subsets S of prod_{i in S} v_i * prod_{i not in S} u_i.
// In the affine chart (u_i = 1) this is (1, s1, s2, s3).
std::array<Complex, 4> sym_elem(const ProjPoint& w1, const ProjPoint& w2, const ProjPoint& w3);

// Coefficients of prod_{j != i} (u_ij v - v_ij u) in the basis
// (v^3, v^2 u, v u^2, u^3), i.e. (sigma0, -sigma1, sigma2, -sigma3) of the
// i-th triplet, scale-normalized to unit norm with the first significant
// entry positive real.
Vec4c atiyah_polynomial(int i, const RootSystem& rs);

// 4x4 matrix whose j-th column is the coefficient vector of p_j. The columns
// are defined up to nonzero scale; column_scales[j] records the factor
// applied to the raw symmetric-polynomial vector: column_j = scale_j * raw_j.
struct AtiyahMatrix {
    Eigen::Matrix4cd m;
    std::array<Complex, 4> column_scales;
};

AtiyahMatrix atiyah_matrix(const RootSystem& rs);
AtiyahMatrix atiyah_matrix(const Configuration& config, const Tolerances& tol = {});

// |det M| for unit-norm columns: in [0, 1] by Hadamard, 0 iff dependent.
double independence_measure(const AtiyahMatrix& m);

// Candidate coefficient vector of the linear relation
//   c0 s3 + c1 s2 + c2 s1 + c3 = 0
// (multihomogeneously: c0 sigma3 + c1 sigma2 + c2 sigma1 + c3 sigma0).
// Normalized to unit norm, first significant entry positive real.
struct RelationVector {
    Vec4c c;
};

// Rebuild a RelationVector from a raw coefficient vector (normalizes).
RelationVector make_relation(const Vec4c& raw);

struct NullvectorResult {
    RelationVector c;
    double residual;  // smallest/largest singular value of M
};

// Left-singular direction of the smallest singular value, re-indexed so that
// evaluate_relation(c, triplet_j) equals (ell^T M)_j / column_scales[j] with
// ell = (c3, -c2, c1, -c0).
NullvectorResult relation_nullvector(const AtiyahMatrix& m);

// c0 sigma3 + c1 sigma2 + c2 sigma1 + c3 sigma0: the multihomogeneous form of
// the relation; symmetric and linear in each argument (it is the polarization
// G of the cubic g below).
Complex evaluate_relation(const RelationVector& c, const ProjPoint& w1, const ProjPoint& w2,
                          const ProjPoint& w3);

inline Complex trilinear_eval(const RelationVector& c, const ProjPoint& w1, const ProjPoint& w2,
                              const ProjPoint& w3) {
    return evaluate_relation(c, w1, w2, w3);
}

// Solve the relation for the third point given two: returns w3 with
// evaluate_relation(c, w1, w2, w3) = 0. Throws DegenerateInputError when the
// relation is indeterminate in w3 (both homogeneous components vanish).
ProjPoint complete_triplet(const RelationVector& c, const ProjPoint& w1, const ProjPoint& w2);

// g(u, v) = c0 v^3 + 3 c1 u v^2 + 3 c2 u^2 v + c3 u^3 = G(w, w, w), with its
// three projective roots. Coefficient order: coeffs[k] multiplies v^{3-k} u^k.
struct RelationCubic {
    std::array<Complex, 4> coeffs;
    std::array<ProjPoint, 3> roots;
    std::array<int, 3> multiplicity;  // cluster size of each root at tol.root_cluster

    Complex eval(const ProjPoint& w) const;
};

RelationCubic polarize(const RelationVector& c, const Tolerances& tol = {});

enum class ScenarioTag { three_distinct, double_root, triple_root };
const char* to_string(ScenarioTag tag);

// Root-multiplicity case of the relation cubic plus the normalizing Mobius
// map: three distinct roots -> (inf, 1, -1); double root -> inf with the
// simple root -> 1; triple root -> 0. Leftover freedom is fixed by reference
// points chosen so the standard forms normalize to the identity.
struct Scenario {
    ScenarioTag tag;
    MobiusMap normalizer;
    RelationCubic cubic;
    double discriminant;  // |disc(g)| / max|coeff|^4
};

Scenario classify_scenario(const RelationVector& c, const Tolerances& tol = {});

// c carried to the standard form of its scenario by the classifier's
// normalizer; the cubic of `standard` is proportional to u v^2 - u^3,
// u^2 v - u^3 or v^3 according to the tag.
struct NormalizedRelation {
    Scenario scenario;
    RelationVector standard;
};

NormalizedRelation normalize_relation(const RelationVector& c, const Tolerances& tol = {});

// Relation vector whose cubic has exactly the given roots (with repeats for
// multiplicity): g = prod_k (u_k v - v_k u).
RelationVector relation_from_roots(const std::array<ProjPoint, 3>& roots);

// Push c through the symmetric-cube action of m, realized by transporting the
// roots of g.
RelationVector transport_relation(const RelationVector& c, const MobiusMap& m,
                                  const Tolerances& tol = {});

// Projective roots of a binary cubic q0 v^3 + q1 v^2 u + q2 v u^2 + q3 u^3,
// computed in a unitarily twisted chart so roots at infinity lose nothing.
std::array<ProjPoint, 3> cubic_roots(const std::array<Complex, 4>& q);

}  // namespace atiyah4
