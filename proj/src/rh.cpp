#include "fl/rh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fl/parallel.hpp"

namespace fl {

void JumpData::validate() const
{
    const SpectralGrid& g = r1.grid;
    if (r1.values.size() != g.size() || r2.values.size() != g.size())
        throw ContractError("jump data: sample counts do not match the grid");
    for (int k = 0; k < g.size(); ++k)
        if (std::abs(r2.values[k] - 4.0 * g.nodes[k] * r1.values[k]) > 1e-10 * std::max(1.0, std::abs(r2.values[k])))
            throw ContractError("jump data: r2 != 4 z r1 at z = " + format_double(g.nodes[k]));
    r1.check_finite("r1");
    r2.check_finite("r2");
}

namespace {

VecC modulation(const SpectralGrid& g, double x, double sign)
{
    VecC e(g.size());
    for (int k = 0; k < g.size(); ++k) e[k] = std::exp(cplx(0.0, 2.0 * sign * g.nodes[k] * x));
    return e;
}

// P_s v = C v + (s/2) v with the full grid operator.
VecC project(const SpectralGrid& g, const VecC& v, double s) { return cauchy_pv_apply(g, v) + 0.5 * s * v; }

} // namespace

MatC assemble_system(const JumpData& jump)
{
    jump.validate();
    const SpectralGrid& g = jump.r1.grid;
    const int n = g.size();
    PlemeljMatrices P = plemelj_matrices(g);
    VecC da = jump.r2.values.cwiseProduct(modulation(g, jump.x, +1));
    VecC db = jump.r1.values.conjugate().cwiseProduct(modulation(g, jump.x, -1));
    MatC pa = P.minus() * da.asDiagonal();
    MatC pb = P.plus() * db.asDiagonal();
    MatC K = MatC::Identity(4 * n, 4 * n);
    for (int c = 0; c < 2; ++c) {
        int o = 2 * n * c;
        K.block(o, o + n, n, n) = -pa;
        K.block(o + n, o, n, n) = -pb;
    }
    return K;
}

VecC system_rhs(const SpectralGrid& g)
{
    const int n = g.size();
    VecC b = VecC::Zero(4 * n);
    b.segment(0, n).setOnes();         // X_1 = 1 + ...
    b.segment(3 * n, n).setOnes();     // Y_2 = 1 + ...
    return b;
}

DeltaData delta_build(const ComplexSamples& r1, const ComplexSamples& r2)
{
    const SpectralGrid& g = r1.grid;
    const int n = g.size();
    VecC L(n);
    for (int k = 0; k < n; ++k) {
        double rho = (std::conj(r1.values[k]) * r2.values[k]).real();
        if (!(1.0 + rho > 0.0))
            throw DomainError("delta_build: 1 + conj(r1) r2 = " + format_double(1.0 + rho) +
                              " is not positive at z = " + format_double(g.nodes[k]));
        L[k] = std::log1p(rho);
    }
    VecC cl = cauchy_pv_apply(g, L);
    DeltaData d;
    d.log_density = {g, L};
    d.delta_plus = {g, (cl + 0.5 * L).array().exp().matrix()};
    d.delta_minus = {g, (cl - 0.5 * L).array().exp().matrix()};
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) acc += g.weights[k] * L[k] / g.nodes[k];
    d.delta_zero = std::exp(acc / (2.0 * kPi * kI));
    return d;
}

// ---------------------------------------------------------------- batch solver

RHBatch::RHBatch(const ComplexSamples& r1, const ComplexSamples& r2, const RHOptions& opt)
    : r1_(r1), r2_(r2), opt_(opt)
{
    init();
}

RHBatch::RHBatch(const ComplexSamples& r1, const ComplexSamples& r2, const DeltaData& delta, const RHOptions& opt)
    : r1_(r1), r2_(r2), delta_(delta), has_delta_(true), opt_(opt)
{
    init();
}

void RHBatch::init()
{
    JumpData{r1_, r2_, 0.0}.validate();
    const SpectralGrid& g = r1_.grid;
    const int n = g.size();
    double mx = std::max(r1_.values.cwiseAbs().maxCoeff(), r2_.values.cwiseAbs().maxCoeff());
    for (int k = 0; k < n; ++k)
        if (mx > 0 && std::max(std::abs(r1_.values[k]), std::abs(r2_.values[k])) > opt_.active_threshold * mx)
            active_.push_back(k);
    const int na = static_cast<int>(active_.size());
    cauchy_cols_ = MatC::Zero(n, na);
    for (int a = 0; a < na; ++a) {
        const int k = active_[a];
        const cplx c = g.weights[k] / (kPi * kI);
        for (int j = (k + 1) % 2; j < n; j += 2) cauchy_cols_(j, a) = c / (g.nodes[k] - g.nodes[j]);
    }
}

void RHBatch::coefficients(double x, bool conditioned, VecC& da, VecC& db, double& sa, double& sb) const
{
    const SpectralGrid& g = r1_.grid;
    da = r2_.values.cwiseProduct(modulation(g, x, +1));
    db = r1_.values.conjugate().cwiseProduct(modulation(g, x, -1));
    if (!conditioned) {
        sa = -1.0;
        sb = +1.0;
        return;
    }
    if (!has_delta_) throw ContractError("conditioned solve requested without delta data");
    VecC pm = delta_.delta_plus.values.cwiseProduct(delta_.delta_minus.values);
    da = da.cwiseProduct(pm.conjugate());
    db = db.cwiseProduct(pm);
    sa = +1.0;
    sb = -1.0;
}

MatC RHBatch::active_operator(const VecC& da, const VecC& db, double sa, double sb) const
{
    const int na = static_cast<int>(active_.size());
    MatC caa(na, na);
    for (int i = 0; i < na; ++i) caa.row(i) = cauchy_cols_.row(active_[i]);
    VecC dA(na), dB(na);
    for (int i = 0; i < na; ++i) {
        dA[i] = da[active_[i]];
        dB[i] = db[active_[i]];
    }
    MatC K = MatC::Identity(2 * na, 2 * na);
    K.topRightCorner(na, na) = -(caa * dA.asDiagonal());
    K.bottomLeftCorner(na, na) = -(caa * dB.asDiagonal());
    K.topRightCorner(na, na).diagonal() -= 0.5 * sa * dA;
    K.bottomLeftCorner(na, na).diagonal() -= 0.5 * sb * dB;
    return K;
}

double RHBatch::condition_number(double x, bool conditioned) const
{
    VecC da, db;
    double sa, sb;
    coefficients(x, conditioned, da, db, sa, sb);
    if (active_.empty()) return 1.0;
    MatC K = active_operator(da, db, sa, sb);
    Eigen::BDCSVD<MatC> svd(K);
    const VecR& s = svd.singularValues();
    return s[0] / s[s.size() - 1];
}

RHSolution RHBatch::solve(double x, bool conditioned) const
{
    const SpectralGrid& g = r1_.grid;
    const int n = g.size();
    const int na = static_cast<int>(active_.size());
    VecC da, db;
    double sa, sb;
    coefficients(x, conditioned, da, db, sa, sb);

    RHSolution sol;
    sol.x = x;
    sol.conditioned = conditioned;
    std::array<VecC, 2> X, Y;
    for (int c = 0; c < 2; ++c) {
        X[c] = VecC::Constant(n, c == 0 ? 1.0 : 0.0);
        Y[c] = VecC::Constant(n, c == 1 ? 1.0 : 0.0);
    }

    if (na > 0) {
        MatC caa(na, na);
        for (int i = 0; i < na; ++i) caa.row(i) = cauchy_cols_.row(active_[i]);
        VecC dA(na), dB(na);
        for (int i = 0; i < na; ++i) {
            dA[i] = da[active_[i]];
            dB[i] = db[active_[i]];
        }
        // A = (P_a)_AA D_a, B = (P_b)_AA D_b
        MatC A = caa * dA.asDiagonal();
        MatC B = caa * dB.asDiagonal();
        A.diagonal() += 0.5 * sa * dA;
        B.diagonal() += 0.5 * sb * dB;
        MatC S = MatC::Identity(na, na) - A * B;
        Eigen::PartialPivLU<MatC> lu(S);
        double rc = lu.rcond();
        if (!(rc > 1e-15)) {
            Eigen::BDCSVD<MatC> svd(active_operator(da, db, sa, sb));
            throw SolverError("RH system singular at x = " + format_double(x) + "; smallest singular value " +
                              format_double(svd.singularValues().minCoeff()));
        }
        sol.condition_estimate = 1.0 / rc;
        if (sol.condition_estimate > opt_.cond_warn)
            sol.warnings.push_back("condition estimate " + format_double(sol.condition_estimate) + " at x = " +
                                   format_double(x));

        MatC rhs(na, 2);
        rhs.col(0).setOnes();
        rhs.col(1) = A * VecC::Ones(na);
        MatC XA = lu.solve(rhs);
        MatC YA(na, 2);
        YA.col(0) = B * XA.col(0);
        YA.col(1) = VecC::Ones(na) + B * XA.col(1);
        sol.residual = (S * XA - rhs).cwiseAbs().maxCoeff();

        // Values on every node follow explicitly from the active ones.
        for (int c = 0; c < 2; ++c) {
            VecC ya = YA.col(c).cwiseProduct(dA);
            VecC xb = XA.col(c).cwiseProduct(dB);
            X[c] += cauchy_cols_ * ya;
            Y[c] += cauchy_cols_ * xb;
            for (int i = 0; i < na; ++i) {
                X[c][active_[i]] += 0.5 * sa * ya[i];
                Y[c][active_[i]] += 0.5 * sb * xb[i];
            }
        }
        if (!(sol.residual <= opt_.solver_tol))
            throw SolverError("RH residual " + format_double(sol.residual) + " at x = " + format_double(x));
    }

    for (int c = 0; c < 2; ++c) {
        sol.unknown_x[c] = {g, X[c]};
        sol.unknown_y[c] = {g, Y[c]};
        if (!conditioned) {
            sol.m_minus_col1[c] = {g, X[c]};
            sol.m_plus_col2[c] = {g, Y[c]};
        } else {
            sol.m_minus_col1[c] = {g, (X[c] - da.cwiseProduct(Y[c])).cwiseProduct(delta_.delta_minus.values)};
            sol.m_plus_col2[c] = {g, (Y[c] + db.cwiseProduct(X[c])).cwiseQuotient(delta_.delta_plus.values)};
        }
        sol.m_minus_col1[c].check_finite("M_-1");
        sol.m_plus_col2[c].check_finite("M_+2");
    }
    return sol;
}

std::vector<RHSolution> RHBatch::solve_all(const std::vector<double>& xs, double x_switch) const
{
    std::vector<RHSolution> out(xs.size());
    parallel_for(static_cast<int>(xs.size()), [&](int i) { out[i] = solve(xs[i], has_delta_ && xs[i] < x_switch); });
    return out;
}

RHSolution solve_columns(const JumpData& jump, const RHOptions& opt)
{
    return RHBatch(jump.r1, jump.r2, opt).solve(jump.x, false);
}

RHSolution solve_columns_conditioned(const JumpData& jump, const DeltaData& delta, const RHOptions& opt)
{
    return RHBatch(jump.r1, jump.r2, delta, opt).solve(jump.x, true);
}

double jump_residual(const RHSolution& sol, const JumpData& jump)
{
    const SpectralGrid& g = jump.r1.grid;
    VecC da = jump.r2.values.cwiseProduct(modulation(g, jump.x, +1));
    VecC db = jump.r1.values.conjugate().cwiseProduct(modulation(g, jump.x, -1));
    double res = 0.0;
    for (int c = 0; c < 2; ++c) {
        const VecC& m1 = sol.m_minus_col1[c].values;
        const VecC& m2 = sol.m_plus_col2[c].values;
        VecC e1 = m1 - project(g, da.cwiseProduct(m2), -1.0);
        VecC e2 = m2 - project(g, db.cwiseProduct(m1), +1.0);
        e1.array() -= (c == 0 ? 1.0 : 0.0);
        e2.array() -= (c == 1 ? 1.0 : 0.0);
        res = std::max({res, e1.cwiseAbs().maxCoeff(), e2.cwiseAbs().maxCoeff()});
    }
    return res;
}

void write_rh_csv(const std::string& path, const RHSolution& s)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "z,re_m11,im_m11,re_m21,im_m21,re_m12,im_m12,re_m22,im_m22\n";
    const SpectralGrid& g = s.m_minus_col1[0].grid;
    for (int k = 0; k < g.size(); ++k) {
        out << format_double(g.nodes[k]);
        for (const ComplexSamples* c : {&s.m_minus_col1[0], &s.m_minus_col1[1], &s.m_plus_col2[0], &s.m_plus_col2[1]})
            out << ',' << format_double(c->values[k].real()) << ',' << format_double(c->values[k].imag());
        out << '\n';
    }
}

} // namespace fl
