#pragma once

#include "lojex/bounds.hpp"
#include "lojex/polynomial.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lojex {

enum class SystemCase { interior, boundary };
enum class ElimRoute { cross, tangent };  // cross-product constraints vs tangent-variable system
enum class ElimMethod { resultant, interpolate };

struct EliminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Auxiliary polynomial system whose projection to the (y, u) plane carries
/// the relation between level values y = f(x) and gradient minima
/// u = |grad f(x)|^2. Variables are x1..xn, y, u and, for the tangent
/// route, t1..tn, z1..zn (t = grad f, z = grad |grad f|^2).
struct EliminationSystem {
    SystemCase kase = SystemCase::interior;
    ElimRoute route = ElimRoute::cross;
    int n = 0;          // x-dimension
    int nvars = 0;      // total variables
    int y_index = 0;
    int u_index = 0;
    std::vector<std::string> var_names;
    std::vector<Polynomial> generators;
    std::vector<std::string> generator_names;
    std::vector<int> generator_degree_bounds;  // generic bounds in terms of deg P
    std::vector<std::string> dropped;  // constructs that vanished identically
    BigInt degree_budget;              // product of the generator degree bounds
    BigInt component_degree_bound;     // closed-form bound for the carrying component
};

/// G(x, y, u) = sum_i (dP/dx_i)^2 - (dP/dy)^2 * u; vanishes along
/// (x, f(x), |grad f(x)|^2). Input P lives in (x1..xn, y); the result gains
/// the trailing u variable.
Polynomial gradient_relation(const Polynomial& P);

/// Interior-case system. cross route: {P, G} plus the cross-product
/// constraints K_{ij} = P_xi * G_xj - P_xj * G_xi for i < j (valid when
/// dP/dy does not vanish on the branch). tangent route: {P, G1, G2_i,
/// G3_i, G4_ij} in the extended t, z variables; use_k3 swaps G3_i for the
/// K3_i form that is polynomial in dP/dy.
EliminationSystem build_interior_system(const Polynomial& P, ElimRoute route,
                                        bool use_k3 = false);

/// Boundary-case system on the sphere of radius r: {P, G0, G} for n = 2,
/// plus the triple determinants K_{ijk} (columns dP/dx, dG/dx, x) when
/// n >= 3. The route parameter is accepted for interface symmetry and
/// ignored: the generator set is fixed per dimension. n = 1 is rejected
/// (interval boundary is handled by the one-variable order formula).
EliminationSystem build_boundary_system(const Polynomial& P, const Rational& r,
                                        ElimRoute route = ElimRoute::cross);

struct CurveFactor {
    Polynomial factor;  // in (u, y)
    int multiplicity = 1;
    bool kept = false;
    std::string reason;
};

/// Plane curve Q(y, u) vanishing on the projection of the elimination
/// system. Q is stored with variable order (u, y) and is square-free with
/// extraneous factors pruned.
struct PlaneCurve {
    Polynomial Q;  // 2 variables, order (u, y)
    int degree = 0;
    std::vector<CurveFactor> factors;
    std::string provenance;       // "symbolic-resultant" | "numeric-interpolation"
    double residual = -1.0;       // max_j |Q(y_j,u_j)| / (1 + sum|coeffs|); -1 without samples
    bool degree_capped = false;   // interpolation exhausted the cap
    bool within_budget = true;
    BigInt degree_budget;
    std::vector<std::string> notes;
};

struct ElimOptions {
    int degree_cap = 12;
    double svd_tol = 1e-9;
    double residual_tol = 1e-6;
    double factor_vanish_tol = 1e-6;
    bool prune = true;
};

/// Eliminate everything but (y, u). The resultant method runs a pairwise
/// resultant cascade with square-free/content cleanup between stages; the
/// interpolation method fits the smallest-degree curve through the profile
/// samples by SVD null space. profile_samples are (y, u) pairs; they drive
/// extraneous-factor pruning and the residual check (and are mandatory for
/// interpolation).
PlaneCurve eliminate_to_curve(const EliminationSystem& sys, ElimMethod method,
                              std::span<const std::pair<double, double>> profile_samples,
                              const ElimOptions& opts = {});

/// Exponent bound read off the curve degree D: 1 - 1/D for even D,
/// 1 - 1/(D+1) for odd D.
Rational parity_degree_bound(const PlaneCurve& curve);

struct ExponentCandidates {
    std::vector<Rational> slopes;  // candidate rho values in (0, 1), sorted
    Rational parity_bound;
};

/// Candidate exponents (S1-S)/(2(N-N1)) over pairs of monomials u^N y^S,
/// u^N1 y^S1 of Q, filtered to (0, 1). The true exponent at the center is
/// one of these whenever Q vanishes along the extremal curve.
ExponentCandidates slope_candidates(const PlaneCurve& curve);

}  // namespace lojex
