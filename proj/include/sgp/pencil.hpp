#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sgp/geometry.hpp"
#include "sgp/polynomial.hpp"
#include "sgp/structure.hpp"
#include "sgp/template_engine.hpp"

namespace sgp {

struct ActionPencil {
  Eigen::MatrixXd T0;
  Eigen::MatrixXd T1;
};

// a T1 b = T0 b for the basic monomial vector b and a = 1/w.
ActionPencil build_action_pencil(const EliminatedBlocks& blocks, const TemplateStructure& structure);

// beta T0 v = alpha T1 v with |alpha|^2 + beta^2 = 1 and |v| = 1.
struct EigenPair {
  cdouble alpha;
  double beta;
  Eigen::VectorXcd v;
};

std::vector<EigenPair> solve_pencil(const ActionPencil& pencil);

struct Candidate {
  ComplexPose pose;
  bool valid = false;
  double residual = -1.0;
  bool real = false;
};

std::vector<Candidate> extract_candidates(const std::vector<EigenPair>& pairs,
                                          const TemplateStructure& structure);

inline constexpr double kRealTol = 1e-6;
inline constexpr double kConjugateTol = 1e-6;
inline constexpr int kNumRoots = 40;

bool is_real_pose(const ComplexPose& pose, double tol = kRealTol);

struct StageTimings {
  double template_ms = 0;  // polynomial system, assembly and Schur reduction
  double plu_ms = 0;
  double qz_ms = 0;        // pencil, QZ and extraction
  double filter_ms = 0;
  double total_ms = 0;
};

struct SolutionSet {
  std::vector<Candidate> candidates;  // one per eigenvector
  std::vector<int> accepted;          // candidate indices, ascending residual
  std::vector<int> partner;           // per accepted slot: slot of its conjugate, own slot if real, -1 if unpaired
  double gap = 0.0;                   // log10 eps_40 - log10 eps_41
  double rcond = 0.0;
  StageTimings timings;

  const Candidate& root(int k) const { return candidates[accepted[k]]; }
  int real_count() const;
  bool conjugate_closed() const;
  std::vector<double> accepted_residuals() const;
};

SolutionSet filter_roots(const PolynomialSystem& system, std::vector<Candidate> candidates);

struct SolveOptions {
  // Rotate both platform frames by fixed generic rotations before solving.
  bool frame_conditioning = true;
  SchurPath schur_path = SchurPath::BackSubstitution;
  // Newton steps applied to each accepted root after filtering; 0 disables.
  int polish_iterations = 0;
};

// Newton refinement of the accepted roots on the given system. Real roots stay
// real; a step is kept only if it lowers the normalized residual.
void polish_roots(const PolynomialSystem& system, SolutionSet& S, int iterations);

// Runs the pipeline on a prepared system; no frame change is applied.
SolutionSet solve_system(const PolynomialSystem& system, const TemplateStructure& structure,
                         const SolveOptions& opts = {});

SolutionSet forward_kinematics(const PlatformGeometry& geom, const LegMeasurements& L,
                               const SolveOptions& opts = {});

// Fixed rotations used by frame conditioning.
const Mat3& conditioning_base_rotation();
const Mat3& conditioning_top_rotation();

}  // namespace sgp
