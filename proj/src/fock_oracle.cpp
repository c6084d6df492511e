// fock_oracle.cpp — Truncated Fock-space master-equation integrator.

#include "neqsteady/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace neqsteady {

namespace {

long long checked_dimension(const std::vector<int>& cutoffs) {
    if (cutoffs.empty()) {
        throw InvalidSpecError("FockBasis: at least one mode required");
    }
    long long d = 1;
    for (int c : cutoffs) {
        if (c < 1) {
            throw InvalidSpecError("FockBasis: cutoffs must be >= 1");
        }
        d *= (c + 1);
        if (d > 4096) {
            throw InvalidSpecError("FockBasis: product of (cutoff+1) exceeds the guard limit");
        }
    }
    return d;
}

} // namespace

FockBasis::FockBasis(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    dimension_ = static_cast<Eigen::Index>(checked_dimension(cutoffs_));
    const int n = mode_count();

    occupancy_.resize(static_cast<std::size_t>(dimension_));
    total_.resize(static_cast<std::size_t>(dimension_));
    std::vector<int> occ(static_cast<std::size_t>(n), 0);
    int max_total = 0;
    for (Eigen::Index idx = 0; idx < dimension_; ++idx) {
        occupancy_[static_cast<std::size_t>(idx)] = occ;
        const int tot = std::accumulate(occ.begin(), occ.end(), 0);
        total_[static_cast<std::size_t>(idx)] = tot;
        max_total = std::max(max_total, tot);
        // increment mixed-radix counter, last mode fastest
        for (int k = n - 1; k >= 0; --k) {
            if (++occ[static_cast<std::size_t>(k)] <= cutoffs_[static_cast<std::size_t>(k)]) {
                break;
            }
            occ[static_cast<std::size_t>(k)] = 0;
        }
    }
    sectors_.resize(static_cast<std::size_t>(max_total) + 1);
    for (Eigen::Index idx = 0; idx < dimension_; ++idx) {
        sectors_[static_cast<std::size_t>(total_[static_cast<std::size_t>(idx)])].push_back(idx);
    }
}

CMatrix FockBasis::annihilation(int mode) const {
    CMatrix a = CMatrix::Zero(dimension_, dimension_);
    // stride of `mode` in the mixed-radix enumeration
    Eigen::Index stride = 1;
    for (int k = mode_count() - 1; k > mode; --k) {
        stride *= cutoffs_[static_cast<std::size_t>(k)] + 1;
    }
    for (Eigen::Index idx = 0; idx < dimension_; ++idx) {
        const int nq = occupancy(idx, mode);
        if (nq > 0) {
            a(idx - stride, idx) = std::sqrt(static_cast<double>(nq));
        }
    }
    return a;
}

double FockState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver((rho + rho.adjoint()) / 2.0,
                                                  Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

FockState thermal_product_state(const FockBasis& basis, const std::vector<double>& occupations) {
    if (static_cast<int>(occupations.size()) != basis.mode_count()) {
        throw InvalidSpecError("thermal_product_state: one occupation per mode required");
    }
    FockState s;
    s.cutoffs = basis.cutoffs();
    s.rho = CMatrix::Zero(basis.dimension(), basis.dimension());
    for (Eigen::Index idx = 0; idx < basis.dimension(); ++idx) {
        double p = 1.0;
        for (int m = 0; m < basis.mode_count(); ++m) {
            const double nbar = occupations[static_cast<std::size_t>(m)];
            const double q = nbar / (1.0 + nbar);
            p *= (1.0 - q) * std::pow(q, basis.occupancy(idx, m));
        }
        s.rho(idx, idx) = p;
    }
    s.rho /= s.rho.trace().real();
    return s;
}

Liouvillian::Liouvillian(const FockBasis& basis, const CMatrix& mode_transform,
                         const CMatrix& omega_qform, const CMatrix& lambda_plus,
                         const CMatrix& lambda_minus)
    : basis_(&basis), n_modes_(basis.mode_count()) {
    const int n = n_modes_;
    if (mode_transform.rows() != n || omega_qform.rows() != n || lambda_plus.rows() != n ||
        lambda_minus.rows() != n) {
        throw InvalidSpecError("Liouvillian: coefficient dimensions must match the mode count");
    }

    std::vector<CMatrix> local(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        local[static_cast<std::size_t>(m)] = basis.annihilation(m);
    }

    jump_lower_.resize(static_cast<std::size_t>(n));
    jump_raise_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        CMatrix b = CMatrix::Zero(basis.dimension(), basis.dimension());
        for (int m = 0; m < n; ++m) {
            b += mode_transform(i, m) * local[static_cast<std::size_t>(m)];
        }
        jump_lower_[static_cast<std::size_t>(i)] = b;
        jump_raise_[static_cast<std::size_t>(i)] = b.adjoint();
    }

    CMatrix h = CMatrix::Zero(basis.dimension(), basis.dimension());
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (omega_qform(p, q) != Complex(0.0, 0.0)) {
                h += omega_qform(p, q) * (jump_raise_[static_cast<std::size_t>(p)] *
                                          jump_lower_[static_cast<std::size_t>(q)]);
            }
        }
    }
    frequency_scale_ = omega_qform.cwiseAbs().rowwise().sum().maxCoeff();

    CMatrix k_loss = CMatrix::Zero(basis.dimension(), basis.dimension());
    CMatrix k_gain = CMatrix::Zero(basis.dimension(), basis.dimension());
    gain_partner_.assign(static_cast<std::size_t>(n),
                         CMatrix::Zero(basis.dimension(), basis.dimension()));
    loss_partner_.assign(static_cast<std::size_t>(n),
                         CMatrix::Zero(basis.dimension(), basis.dimension()));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex lm = lambda_minus(i, j);
            const Complex lp = lambda_plus(i, j);
            if (lm != Complex(0.0, 0.0)) {
                k_loss += lm * (jump_raise_[static_cast<std::size_t>(j)] *
                                jump_lower_[static_cast<std::size_t>(i)]);
                loss_partner_[static_cast<std::size_t>(i)] +=
                    lm * jump_raise_[static_cast<std::size_t>(j)];
            }
            if (lp != Complex(0.0, 0.0)) {
                k_gain += lp * (jump_lower_[static_cast<std::size_t>(j)] *
                                jump_raise_[static_cast<std::size_t>(i)]);
                gain_partner_[static_cast<std::size_t>(i)] +=
                    lp * jump_lower_[static_cast<std::size_t>(j)];
            }
        }
    }
    w_eff_ = Complex(0.0, -1.0) * h - 0.5 * (k_loss + k_gain);

    // sector-restricted copies
    const int n_sec = basis.sector_count();
    auto restrict_block = [&](const CMatrix& op, int row_sector, int col_sector) {
        const auto& rows = basis.sector(row_sector);
        const auto& cols = basis.sector(col_sector);
        CMatrix block(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    op(rows[r], cols[c]);
            }
        }
        return block;
    };

    w_blocks_.resize(static_cast<std::size_t>(n_sec));
    for (int s = 0; s < n_sec; ++s) {
        w_blocks_[static_cast<std::size_t>(s)] = restrict_block(w_eff_, s, s);
    }
    lower_blocks_.assign(static_cast<std::size_t>(n), {});
    raise_blocks_.assign(static_cast<std::size_t>(n), {});
    loss_partner_blocks_.assign(static_cast<std::size_t>(n), {});
    gain_partner_blocks_.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        auto& low = lower_blocks_[static_cast<std::size_t>(i)];
        auto& lossp = loss_partner_blocks_[static_cast<std::size_t>(i)];
        auto& up = raise_blocks_[static_cast<std::size_t>(i)];
        auto& gainp = gain_partner_blocks_[static_cast<std::size_t>(i)];
        low.resize(static_cast<std::size_t>(n_sec));
        lossp.resize(static_cast<std::size_t>(n_sec));
        up.resize(static_cast<std::size_t>(n_sec));
        gainp.resize(static_cast<std::size_t>(n_sec));
        for (int s = 1; s < n_sec; ++s) {
            low[static_cast<std::size_t>(s)] =
                restrict_block(jump_lower_[static_cast<std::size_t>(i)], s - 1, s);
            lossp[static_cast<std::size_t>(s)] =
                restrict_block(loss_partner_[static_cast<std::size_t>(i)], s, s - 1);
        }
        for (int s = 0; s + 1 < n_sec; ++s) {
            up[static_cast<std::size_t>(s)] =
                restrict_block(jump_raise_[static_cast<std::size_t>(i)], s + 1, s);
            gainp[static_cast<std::size_t>(s)] =
                restrict_block(gain_partner_[static_cast<std::size_t>(i)], s, s + 1);
        }
    }
}

Liouvillian Liouvillian::normal_form(const FockBasis& basis, const NormalModeBasis& modes,
                                     const DissipatorSet& diss) {
    const Eigen::Index n = modes.eigenfrequencies.size();
    CMatrix eps = CMatrix::Zero(n, n);
    eps.diagonal() = modes.eigenfrequencies.cast<Complex>();
    return Liouvillian(basis, modes.transform, eps, diss.lambda_plus, diss.lambda_minus);
}

Liouvillian Liouvillian::local_form(const FockBasis& basis, const NormalModeBasis& modes,
                                    const LocalRates& rates) {
    const auto tilde = local_lambda_matrices(rates);
    const Eigen::Index n = modes.omega_matrix.rows();
    return Liouvillian(basis, CMatrix::Identity(n, n), modes.omega_matrix, tilde.lambda_plus,
                       tilde.lambda_minus);
}

CMatrix Liouvillian::apply(const CMatrix& rho) const {
    CMatrix out = w_eff_ * rho + rho * w_eff_.adjoint();
    for (int i = 0; i < n_modes_; ++i) {
        out.noalias() += (jump_lower_[static_cast<std::size_t>(i)] * rho) *
                         loss_partner_[static_cast<std::size_t>(i)];
        out.noalias() += (jump_raise_[static_cast<std::size_t>(i)] * rho) *
                         gain_partner_[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<CMatrix> Liouvillian::apply_blocked(const std::vector<CMatrix>& blocks) const {
    const int n_sec = basis_->sector_count();
    std::vector<CMatrix> out(static_cast<std::size_t>(n_sec));
    for (int s = 0; s < n_sec; ++s) {
        const auto& w = w_blocks_[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] =
            w * blocks[static_cast<std::size_t>(s)] + blocks[static_cast<std::size_t>(s)] * w.adjoint();
    }
    for (int i = 0; i < n_modes_; ++i) {
        const auto& low = lower_blocks_[static_cast<std::size_t>(i)];
        const auto& lossp = loss_partner_blocks_[static_cast<std::size_t>(i)];
        const auto& up = raise_blocks_[static_cast<std::size_t>(i)];
        const auto& gainp = gain_partner_blocks_[static_cast<std::size_t>(i)];
        for (int s = 1; s < n_sec; ++s) {
            out[static_cast<std::size_t>(s - 1)].noalias() +=
                (low[static_cast<std::size_t>(s)] * blocks[static_cast<std::size_t>(s)]) *
                lossp[static_cast<std::size_t>(s)];
        }
        for (int s = 0; s + 1 < n_sec; ++s) {
            out[static_cast<std::size_t>(s + 1)].noalias() +=
                (up[static_cast<std::size_t>(s)] * blocks[static_cast<std::size_t>(s)]) *
                gainp[static_cast<std::size_t>(s)];
        }
    }
    return out;
}

std::vector<CMatrix> Liouvillian::to_blocks(const CMatrix& rho) const {
    const int n_sec = basis_->sector_count();
    std::vector<CMatrix> blocks(static_cast<std::size_t>(n_sec));
    for (int s = 0; s < n_sec; ++s) {
        const auto& idx = basis_->sector(s);
        CMatrix b(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < idx.size(); ++c) {
                b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho(idx[r], idx[c]);
            }
        }
        blocks[static_cast<std::size_t>(s)] = std::move(b);
    }
    return blocks;
}

CMatrix Liouvillian::from_blocks(const std::vector<CMatrix>& blocks) const {
    CMatrix rho = CMatrix::Zero(basis_->dimension(), basis_->dimension());
    for (int s = 0; s < basis_->sector_count(); ++s) {
        const auto& idx = basis_->sector(s);
        const auto& b = blocks[static_cast<std::size_t>(s)];
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < idx.size(); ++c) {
                rho(idx[r], idx[c]) = b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return rho;
}

double Liouvillian::off_sector_mass(const CMatrix& rho) const {
    double mass = 0.0;
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        for (Eigen::Index c = 0; c < rho.cols(); ++c) {
            if (basis_->total_excitation(r) != basis_->total_excitation(c)) {
                mass = std::max(mass, std::abs(rho(r, c)));
            }
        }
    }
    return mass;
}

CMatrix liouvillian_apply(const SystemSpec& spec, const NormalModeBasis& modes,
                          const DissipatorSet& diss, const FockState& state) {
    spec.validate();
    FockBasis basis(state.cutoffs);
    if (basis.mode_count() != spec.mode_count()) {
        throw InvalidSpecError("liouvillian_apply: state and spec mode counts differ");
    }
    return Liouvillian::normal_form(basis, modes, diss).apply(state.rho);
}

namespace {

double blocked_max_norm(const std::vector<CMatrix>& blocks) {
    double m = 0.0;
    for (const auto& b : blocks) {
        if (b.size() > 0) {
            m = std::max(m, b.cwiseAbs().maxCoeff());
        }
    }
    return m;
}

double blocked_trace(const std::vector<CMatrix>& blocks) {
    double t = 0.0;
    for (const auto& b : blocks) {
        t += b.trace().real();
    }
    return t;
}

} // namespace

RelaxResult relax_to_steady(const Liouvillian& liouville, const OracleConfig& config,
                            const FockState* initial) {
    const FockBasis& basis = liouville.basis();
    if (static_cast<int>(config.cutoffs.size()) != basis.mode_count() ||
        config.cutoffs != basis.cutoffs()) {
        throw InvalidSpecError("relax_to_steady: config cutoffs must match the Liouvillian basis");
    }
    for (int c : config.cutoffs) {
        if (c < 4) {
            throw InvalidSpecError("relax_to_steady: cutoffs must be >= 4");
        }
    }
    if (basis.dimension() > 1024) {
        throw InvalidSpecError("relax_to_steady: dimension exceeds the 1024 guard");
    }
    if (!(config.t_final > 0.0) || !(config.convergence_tol > 0.0)) {
        throw InvalidSpecError("relax_to_steady: t_final and convergence_tol must be positive");
    }
    FockState state = initial ? *initial : vacuum_state(basis);
    if (state.cutoffs != basis.cutoffs()) {
        throw InvalidSpecError("relax_to_steady: initial state cutoffs mismatch");
    }

    const double dt_cap = 0.1 / liouville.frequency_scale();
    const double dt = config.dt > 0.0 ? config.dt : dt_cap;
    if (dt > dt_cap * (1.0 + 1e-9)) {
        throw InvalidSpecError("relax_to_steady: dt * max frequency exceeds 0.1");
    }

    const bool blocked = liouville.off_sector_mass(state.rho) <
                         1e-14 * std::max(1.0, state.rho.cwiseAbs().maxCoeff());

    RelaxResult result;
    long max_steps = static_cast<long>(std::ceil(config.t_final / dt));
    double deriv_norm = std::numeric_limits<double>::infinity();

    if (blocked) {
        std::vector<CMatrix> rho = liouville.to_blocks(state.rho);
        const int n_sec = basis.sector_count();
        auto axpy = [&](const std::vector<CMatrix>& base, double scale,
                        const std::vector<CMatrix>& dir) {
            std::vector<CMatrix> out(base.size());
            for (std::size_t s = 0; s < base.size(); ++s) {
                out[s] = base[s] + scale * dir[s];
            }
            return out;
        };
        for (long step = 0; step < max_steps; ++step) {
            const auto k1 = liouville.apply_blocked(rho);
            deriv_norm = blocked_max_norm(k1);
            if (deriv_norm < config.convergence_tol) {
                result.converged = true;
                break;
            }
            const auto k2 = liouville.apply_blocked(axpy(rho, 0.5 * dt, k1));
            const auto k3 = liouville.apply_blocked(axpy(rho, 0.5 * dt, k2));
            const auto k4 = liouville.apply_blocked(axpy(rho, dt, k3));
            for (int s = 0; s < n_sec; ++s) {
                rho[static_cast<std::size_t>(s)] +=
                    (dt / 6.0) * (k1[static_cast<std::size_t>(s)] +
                                  2.0 * k2[static_cast<std::size_t>(s)] +
                                  2.0 * k3[static_cast<std::size_t>(s)] +
                                  k4[static_cast<std::size_t>(s)]);
            }
            const double tr = blocked_trace(rho);
            for (auto& b : rho) {
                b /= tr;
            }
            if ((step + 1) % 100 == 0) {
                for (auto& b : rho) {
                    b = ((b + b.adjoint()) / 2.0).eval();
                }
            }
            result.steps = step + 1;
            result.final_time += dt;
        }
        state.rho = liouville.from_blocks(rho);
    } else {
        CMatrix& rho = state.rho;
        for (long step = 0; step < max_steps; ++step) {
            const CMatrix k1 = liouville.apply(rho);
            deriv_norm = k1.cwiseAbs().maxCoeff();
            if (deriv_norm < config.convergence_tol) {
                result.converged = true;
                break;
            }
            const CMatrix k2 = liouville.apply(rho + 0.5 * dt * k1);
            const CMatrix k3 = liouville.apply(rho + 0.5 * dt * k2);
            const CMatrix k4 = liouville.apply(rho + dt * k3);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho /= rho.trace().real();
            if ((step + 1) % 100 == 0) {
                rho = ((rho + rho.adjoint()) / 2.0).eval();
            }
            result.steps = step + 1;
            result.final_time += dt;
        }
    }

    result.final_derivative_norm = deriv_norm;
    if (!result.converged && deriv_norm > 10.0 * config.convergence_tol) {
        throw NotConvergedError("relax_to_steady: derivative norm " + std::to_string(deriv_norm) +
                                " above 10x tolerance at t_final");
    }
    result.converged = result.converged || deriv_norm <= 10.0 * config.convergence_tol;
    result.state = std::move(state);
    return result;
}

CMatrix reduced_marginal_matrix(const FockState& state, int mode) {
    FockBasis basis(state.cutoffs);
    if (mode < 0 || mode >= basis.mode_count()) {
        throw InvalidSpecError("reduced_marginal: mode index out of range");
    }
    const int dim = basis.cutoffs()[static_cast<std::size_t>(mode)] + 1;
    // key identifying the joint occupancy of all other modes
    std::vector<long> rest(static_cast<std::size_t>(basis.dimension()));
    for (Eigen::Index idx = 0; idx < basis.dimension(); ++idx) {
        long key = 0;
        for (int m = 0; m < basis.mode_count(); ++m) {
            if (m == mode) {
                continue;
            }
            key = key * (basis.cutoffs()[static_cast<std::size_t>(m)] + 1) + basis.occupancy(idx, m);
        }
        rest[static_cast<std::size_t>(idx)] = key;
    }
    CMatrix marg = CMatrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < basis.dimension(); ++r) {
        for (Eigen::Index c = 0; c < basis.dimension(); ++c) {
            if (rest[static_cast<std::size_t>(r)] == rest[static_cast<std::size_t>(c)]) {
                marg(basis.occupancy(r, mode), basis.occupancy(c, mode)) += state.rho(r, c);
            }
        }
    }
    return marg;
}

RVector reduced_marginal(const FockState& state, int mode) {
    return reduced_marginal_matrix(state, mode).diagonal().real();
}

double occupation(const FockState& state, int mode) {
    const RVector p = reduced_marginal(state, mode);
    double total = 0.0;
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        total += static_cast<double>(n) * p(n);
    }
    return total;
}

} // namespace neqsteady
