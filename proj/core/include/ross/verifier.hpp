#pragma once

// Numerical reconstruction of the trial-function argument on concrete
// domains: center selection, QR rotation of the trial functions, the
// variational bounds and the integral chain closing the main inequality.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ross/annulus.hpp"
#include "ross/conformal_model.hpp"
#include "ross/fem.hpp"
#include "ross/mesh.hpp"
#include "ross/radial_solver.hpp"
#include "ross/report.hpp"

namespace ross {

// ---------------------------------------------------------------- domains

struct AnnulusDomain {
  double r_in = 0.5;
  double r_out = 1.5;
};

struct DomainSpec {
  std::string text;  // the string it was parsed from
  std::variant<BoundaryCurve, AnnulusDomain> shape;

  bool is_annulus() const { return std::holds_alternative<AnnulusDomain>(shape); }
  bool is_ball() const;
};

/// Grammar:
///   ball:R[,cx,cy]                 geodesic disk, center in normal coordinates
///   ellipse:a,b[,angle[,cx,cy]]
///   peanut:a,delta[,angle[,cx,cy]]
///   annulus:r_in,r_out             radial shell about a point, any dimension
///   polyline:path                  file of "x y" chart points
/// Throws std::invalid_argument on malformed text.
DomainSpec parse_domain(std::string_view text, const Space& space);

// ---------------------------------------------------------- center, trials

struct CenterResult {
  Point center{0.0, 0.0};
  double residual = 0.0;  // |sum_v (M 1)_v G(r_o) omega(x_v)|
  double scale = 0.0;     // sum_v (M 1)_v G(r_o)
  int iterations = 0;
  std::string method;              // "newton" or "grid+newton"
  std::vector<Point> all_centers;  // distinct solutions from several seeds
  std::string trace;
};

/// Zero of o -> sum_v w_v G(r_o(x_v)) omega_o(x_v), w = M 1 (the discrete
/// first moments), by damped Newton from the weighted barycenter with a
/// finite-difference Jacobian, then grid search + Newton if that fails.
/// Throws ConvergenceError when the residual stays above tol_rel * scale.
CenterResult select_center(const ConformalModel& model, const Mesh& mesh, const Eigen::VectorXd& weights,
                           const ExtendedProfile& G, double tol_rel = 1e-8);

/// Vertex values G(r_o) omega_i, one column per direction (m = 2).
Eigen::MatrixXd trial_functions(const ConformalModel& model, const Mesh& mesh, const ExtendedProfile& G,
                                Point center);

struct Rotation {
  Eigen::MatrixXd a;  // orthogonal, a * q upper triangular
  bool rank_deficient = false;
  std::string warning;
};

/// Rotation from the Householder QR of q (q = Q R, a = Q^T). Rank-deficient
/// q yields the identity and a warning.
Rotation orthogonalize(const Eigen::MatrixXd& q);

struct TrialSetup {
  explicit TrialSetup(BallEig b) : ball(std::move(b)) {}

  Mesh mesh;
  FemSystem system;
  SpectrumResult spectrum;
  BallEig ball;
  ExtendedProfile G;
  double area = 0.0;
  CenterResult center;
  Eigen::MatrixXd v;        // raw trial functions
  Eigen::MatrixXd q;        // q_ij = v_i^T M u_j
  Rotation rotation;
  Eigen::MatrixXd rotated;  // columns sum_k a_ik v_k
};

// ---------------------------------------------------------------- checks

struct CheckContext {
  Space space;
  std::string domain_hash;
  double h = 0.0;
  std::vector<std::string> solver_tags;
  std::string provenance;
};

/// Per-i discrete variational bound and the orthogonality premises.
std::vector<Check> trial_bound_check(const TrialSetup& setup, const CheckContext& context);

/// sum_{i<=L} 1/mu_i against L / mu_1(B) with |B| = area. For a ball domain
/// the entry is the equality case, judged by |margin| < 1e-3.
Check check_main_inequality(const Space& space, double area, const std::vector<double>& mu,
                            const CheckContext& context, bool ball_domain = false,
                            std::optional<double> mu1_ball = std::nullopt);

/// The integral chain on the FEM domain (quadrature over the mesh polygon and
/// radial integrals over B).
std::vector<Check> check_chain(const ConformalModel& model, const TrialSetup& setup, const CheckContext& context);

// -------------------------------------------------------------- pipelines

struct VerifyOptions {
  double h = 0.04;
  int count = 0;  // FEM eigenpairs beyond mu_0; 0 means m
  std::uint64_t seed = 0;
  double jitter = 0.0;
  unsigned threads = 0;
  double shooting_tol = 1e-10;
  int annulus_modes = 4;  // radial indices per angular mode
};

struct VerifyResult {
  Report report;
  std::optional<TrialSetup> setup;  // FEM domains
  std::optional<AnnulusModes> annulus;
  std::optional<BallEig> ball;
  std::string domain_text;  // mesh text or descriptor, hashed into the report
};

/// mesh -> spectrum -> center -> trial functions -> checks.
VerifyResult verify_fem(const Space& space, const DomainSpec& domain, const VerifyOptions& options);

/// Candidate (modes 0 and 1) spectrum of an annulus; passes are sound, a
/// failure is reported as inconclusive.
VerifyResult verify_annulus(const Space& space, const AnnulusDomain& annulus, const VerifyOptions& options);

VerifyResult verify(const Space& space, const DomainSpec& domain, const VerifyOptions& options);

}  // namespace ross
