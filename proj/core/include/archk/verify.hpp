#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "archk/kernel.hpp"
#include "archk/rng.hpp"
#include "archk/space.hpp"

namespace archk {

// Outcome of one numerical check. The witness holds whatever inputs
// produced the worst violation, re-evaluable to the same number.
struct CheckReport {
  std::string name;
  std::string dimension;          // empty for whole-matrix checks
  std::size_t samples = 0;
  double worst = 0.0;             // worst violation seen (signed)
  double tolerance = 0.0;
  bool pass = false;
  std::vector<Config> witness;    // configs achieving the worst violation
  double detail = 0.0;            // check-specific extra (e.g. min eigenvalue)
};

// Minimum-eigenvalue PSD certificate: pass iff lambda_min >= -tol*N.
// Rejects matrices with max |K - K^T| > 1e-12.
CheckReport check_psd(const GramMatrix& matrix, double tol = 1e-8);
CheckReport check_psd(const Eigen::MatrixXd& matrix, double tol = 1e-8);

// Triangle inequality per dimension over sampled triples, stratified so
// every activity pattern occurs: reports max d(x,y) - d(x,z) - d(y,z).
std::vector<CheckReport> check_triangle(const KernelSpec& spec, std::size_t n_triples,
                                        std::uint64_t seed);

// Distance-vs-embedding residual per dimension over sampled pairs:
// reports max |d_i(x,y) - ||f_i(x) - f_i(y)||_2|.
std::vector<CheckReport> check_isometry(const KernelSpec& spec, std::size_t n_pairs,
                                        std::uint64_t seed);

// Draws a config in which `id` is active (true) or inactive (false), built
// by walking the ancestor clauses; falls back to rejection from plain
// sampling when the pattern cannot be forced directly. Returns false if no
// such config was found (e.g. asking a root to be inactive).
bool sample_with_activity(const ParamSpace& space, std::size_t index, bool want_active,
                          Rng& rng, Config& out);

}  // namespace archk
