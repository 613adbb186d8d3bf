#pragma once

#include <array>
#include <complex>

#include "atiyah4/ball.hpp"

namespace atiyah4 {

using Complex = std::complex<double>;

// Point of CP^1 as a homogeneous pair (u, v); the affine coordinate is
// t = v/u. Stored normalized to max(|u|, |v|) = 1.
class ProjPoint {
  public:
    ProjPoint() : u_(1.0), v_(0.0) {}  // t = 0
    ProjPoint(Complex u, Complex v);

    static ProjPoint from_affine(Complex t) { return ProjPoint(1.0, t); }
    static ProjPoint infinity() { return ProjPoint(0.0, 1.0); }

    Complex u() const { return u_; }
    Complex v() const { return v_; }

    // Affine coordinate v/u; infinite (or huge) when |u| is tiny.
    Complex affine() const { return v_ / u_; }
    bool finite_affine(double max_abs = 1e12) const { return std::abs(v_) < max_abs * std::abs(u_); }

  private:
    Complex u_, v_;
};

// |u1 v2 - u2 v1| scaled by the stored max-norms; the sine-like projective
// distance in [0, ~1].
double proj_distance(const ProjPoint& p, const ProjPoint& q);
bool proj_equal(const ProjPoint& p, const ProjPoint& q, double tol = 1e-10);

// Element of PSL(2,C): t -> (a t + b)/(c t + d), entries normalized to
// det = 1 (global sign irrelevant).
class MobiusMap {
  public:
    MobiusMap() : a_(1.0), b_(0.0), c_(0.0), d_(1.0) {}
    MobiusMap(Complex a, Complex b, Complex c, Complex d);

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }

    MobiusMap inverse() const { return MobiusMap(d_, -b_, -c_, a_); }
    // Composition: (m1 * m2)(t) = m1(m2(t)).
    friend MobiusMap operator*(const MobiusMap& m1, const MobiusMap& m2);

  private:
    Complex a_, b_, c_, d_;
};

// Projective equality of maps (up to the PSL sign).
bool mobius_equal(const MobiusMap& m1, const MobiusMap& m2, double tol = 1e-9);

ProjPoint apply_mobius(const MobiusMap& m, const ProjPoint& p);

// Stereographic projection from the north pole (0,0,1), which maps to
// infinity: (x,y,z) -> (u,v) = (1-z, x+iy), with the conjugate-pair form
// (x-iy, 1+z) used on the northern hemisphere for stability.
ProjPoint stereographic(const IdealPoint& p);
IdealPoint inverse_stereographic(const ProjPoint& p);

// The unique map sending p_k -> q_k (k = 1,2,3); throws DegenerateInputError
// on coincident sources or targets, ConsistencyError if the result fails to
// reproduce the correspondences within verify_tol.
MobiusMap mobius_from_three_points(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3,
                                   const ProjPoint& q1, const ProjPoint& q2, const ProjPoint& q3,
                                   double verify_tol = 1e-10);

// The Mobius map g_hat with stereographic(g(x)) = g_hat(stereographic(x)) on
// the sphere at infinity, computed by transporting three reference ideal
// points and verified on a fourth.
MobiusMap boundary_action(const BallIsometry& g);

// The twelve ideal endpoints t_ij (i != j) of a configuration, kept both as
// CP^1 points and as their unit-sphere preimages. The diagonal is unset.
class RootSystem {
  public:
    RootSystem() = default;

    const ProjPoint& root(int i, int j) const { return proj_[idx(i, j)]; }
    const IdealPoint& ideal(int i, int j) const { return ideal_[idx(i, j)]; }
    void set(int i, int j, const ProjPoint& p, const IdealPoint& q) {
        proj_[idx(i, j)] = p;
        ideal_[idx(i, j)] = q;
    }

    // Triplet of roots of the Atiyah polynomial p_i: {t_ij : j != i},
    // ordered by j.
    std::array<ProjPoint, 3> triplet(int i) const;

  private:
    static std::size_t idx(int i, int j);
    std::array<ProjPoint, 16> proj_{};
    std::array<IdealPoint, 16> ideal_{};
};

RootSystem root_system(const Configuration& config, const Tolerances& tol = {});

// Transport every root by m (ideal preimages recomputed).
RootSystem transform(const RootSystem& rs, const MobiusMap& m);

}  // namespace atiyah4
