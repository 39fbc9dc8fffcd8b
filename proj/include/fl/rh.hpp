#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fl/core.hpp"

namespace fl {

struct JumpData {
    ComplexSamples r1, r2;
    double x = 0.0;
    void validate() const;
};

struct DeltaData {
    ComplexSamples delta_plus, delta_minus;
    ComplexSamples log_density; // log(1 + conj(r1) r2)
    cplx delta_zero = 1.0;      // delta at z = 0, reached from the upper half plane
};

struct RHSolution {
    double x = 0.0;
    std::array<ComplexSamples, 2> m_minus_col1; // components of M_{-,1}
    std::array<ComplexSamples, 2> m_plus_col2;  // components of M_{+,2}
    // Unknowns actually solved for: (M_{-,1}, M_{+,2}) for plain solves,
    // (M^d_{+,1}, M^d_{-,2}) for conditioned ones.
    std::array<ComplexSamples, 2> unknown_x, unknown_y;
    double residual = 0.0;
    double condition_estimate = 1.0;
    bool conditioned = false;
    std::vector<std::string> warnings;
};

struct RHOptions {
    double active_threshold = 1e-10; // relative to max |r|; nodes below it are dropped from the solve
    double cond_warn = 1e8;
    double solver_tol = 1e-8;
};

// Stacked dense operator over (X_1, Y_1, X_2, Y_2): the two column equations
// X - P_a D_a Y = e_X, Y - P_b D_b X = e_Y with the plain data. Size 4 N.
MatC assemble_system(const JumpData& jump);
// Right-hand side matching assemble_system.
VecC system_rhs(const SpectralGrid& g);

RHSolution solve_columns(const JumpData& jump, const RHOptions& opt = {});
DeltaData delta_build(const ComplexSamples& r1, const ComplexSamples& r2);
RHSolution solve_columns_conditioned(const JumpData& jump, const DeltaData& delta, const RHOptions& opt = {});
// Max-norm residual of the column equations for the back-mapped columns,
// evaluated with the full grid operator.
double jump_residual(const RHSolution& sol, const JumpData& jump);

// Reusable solver for many x with fixed reflection data. Holds the Cauchy
// matrix columns on the active node set.
class RHBatch {
public:
    RHBatch(const ComplexSamples& r1, const ComplexSamples& r2, const RHOptions& opt = {});
    RHBatch(const ComplexSamples& r1, const ComplexSamples& r2, const DeltaData& delta, const RHOptions& opt = {});

    RHSolution solve(double x, bool conditioned) const;
    // Exact condition number (2-norm) of the active two-column operator.
    double condition_number(double x, bool conditioned) const;
    // Parallel map; output order matches xs.
    std::vector<RHSolution> solve_all(const std::vector<double>& xs, double x_switch) const;

    const std::vector<int>& active() const { return active_; }
    const SpectralGrid& grid() const { return r1_.grid; }
    const ComplexSamples& r1() const { return r1_; }
    const ComplexSamples& r2() const { return r2_; }
    bool has_delta() const { return has_delta_; }
    const DeltaData& delta() const { return delta_; }

private:
    void init();
    // Diagonal data and projection signs for one x.
    void coefficients(double x, bool conditioned, VecC& da, VecC& db, double& sa, double& sb) const;
    MatC active_operator(const VecC& da, const VecC& db, double sa, double sb) const;

    ComplexSamples r1_, r2_;
    DeltaData delta_;
    bool has_delta_ = false;
    RHOptions opt_;
    std::vector<int> active_;
    MatC cauchy_cols_; // C(:, active)
};

void write_rh_csv(const std::string& path, const RHSolution& s);

} // namespace fl
