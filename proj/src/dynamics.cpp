#include "photonet/dynamics.hpp"

#include <ostream>

#include "photonet/csv.hpp"

namespace photonet {

namespace {

// Trapezoid over lags 0..t of a stacked block sum; removes half of the two end terms.
// full = sum_{j=0}^{t} A_j B_j, first = A_0 B_0 term, last = A_t B_t term.
Eigen::MatrixXcd trapezoid(const Eigen::MatrixXcd& full, const Eigen::MatrixXcd& first,
                           const Eigen::MatrixXcd& last, double h) {
    return h * (full - 0.5 * first - 0.5 * last);
}

// Int_0^{t_k} K(t_k - s) X(s) ds for one k, with K given reversed-wide (block m = K_{L-m}).
Eigen::MatrixXcd convolve_at(const Eigen::MatrixXcd& k_rev, Index lags_minus_one, const ComplexSeries& kernel,
                             const ComplexSeries& x, Index k, double h) {
    const Index n = kernel.block_rows();
    if (k == 0) {
        return Eigen::MatrixXcd::Zero(n, x.block_cols());
    }
    const Eigen::MatrixXcd full = k_rev.middleCols(n * (lags_minus_one - k), n * (k + 1)) * x.head(k + 1);
    return trapezoid(full, kernel[k] * x[0], kernel[0] * x[k], h);
}

} // namespace

Eigen::MatrixXcd free_step(const Eigen::MatrixXcd& omega, double h, double sign) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(omega);
    const Eigen::VectorXcd phases = (sign * h * eig.eigenvalues()).unaryExpr([](double x) {
        return std::exp(I_UNIT * x);
    });
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

VolterraSolution integrate_volterra(const Eigen::MatrixXcd& step_propagator, const ComplexSeries& kernel, double h,
                                    const Eigen::MatrixXcd& initial, Index n_steps, const ComplexSeries* forcing) {
    const Index n = initial.rows();
    const Index c = initial.cols();
    if (kernel.size() < n_steps + 1) {
        throw Error("memory kernel shorter than the integration window");
    }
    if (forcing && forcing->size() < n_steps + 1) {
        throw Error("forcing shorter than the integration window");
    }
    const Index last_lag = kernel.size() - 1;
    const Eigen::MatrixXcd k_rev = kernel.reversed_wide();
    const Eigen::MatrixXcd& e = step_propagator;

    VolterraSolution sol{ComplexSeries(n_steps + 1, n, c), ComplexSeries(n_steps + 1, n, c)};
    auto& x = sol.values;
    auto& p = sol.memory;
    x[0] = initial;

    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) + (0.25 * h * h) * kernel[0];
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);

    Eigen::MatrixXcd rhs(n, c);
    for (Index step = 0; step < n_steps; ++step) {
        // sum_{j=0}^{step} K_{step+1-j} X_j, minus half of the j = 0 end term.
        const Index m0 = last_lag - (step + 1);
        const Eigen::MatrixXcd corr =
            k_rev.middleCols(n * m0, n * (step + 1)) * x.head(step + 1) - 0.5 * kernel[step + 1] * x[0];
        rhs = x[step] - (0.5 * h) * p[step];
        if (forcing) {
            rhs += (0.5 * h) * (*forcing)[step];
        }
        rhs = e * rhs - (0.5 * h * h) * corr;
        if (forcing) {
            rhs += (0.5 * h) * (*forcing)[step + 1];
        }
        x[step + 1] = lu.solve(rhs);
        if (!x[step + 1].allFinite()) {
            throw SolverError("non-finite value in Volterra integration at step " + std::to_string(step + 1),
                              step + 1);
        }
        p[step + 1] = h * (corr + 0.5 * kernel[0] * x[step + 1]);
    }
    return sol;
}

VolterraSolution solve_u(const KernelSet& kernels, const Eigen::MatrixXcd& omega) {
    const double h = kernels.grid.step();
    const Index n = omega.rows();
    return integrate_volterra(free_step(omega, h), kernels.total_dissipation, h, Eigen::MatrixXcd::Identity(n, n),
                              kernels.grid.n_steps);
}

VolterraSolution solve_y(const KernelSet& kernels, const NetworkSpec& spec) {
    const auto& grid = spec.grid;
    const double h = grid.step();
    const Index n = spec.dim();
    ComplexSeries forcing(grid.n_steps + 1, n, 1);
    for (Index k = 0; k <= grid.n_steps; ++k) {
        forcing[k] = -I_UNIT * drive_vector(spec, grid.time(k));
    }
    return integrate_volterra(free_step(spec.frequencies, h), kernels.total_dissipation, h,
                              Eigen::MatrixXcd::Zero(n, 1), grid.n_steps, &forcing);
}

Eigen::VectorXcd y_by_convolution(const ComplexSeries& u, const NetworkSpec& spec, Index step) {
    const auto& grid = spec.grid;
    const double h = grid.step();
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(spec.dim());
    if (step == 0) {
        return sum;
    }
    for (Index j = 0; j <= step; ++j) {
        const double w = (j == 0 || j == step) ? 0.5 : 1.0;
        sum += w * (u[step - j] * drive_vector(spec, grid.time(j)));
    }
    return -I_UNIT * h * sum;
}

ComplexSeries solve_ubar_column(const ComplexSeries& u, Index t_step) {
    const Index n = u.block_rows();
    ComplexSeries out(t_step + 1, n, n);
    for (Index k = 0; k <= t_step; ++k) {
        out[k] = u[t_step - k].adjoint();
    }
    return out;
}

ComplexSeries solve_ubar_backward(const KernelSet& kernels, const Eigen::MatrixXcd& omega, Index t_step) {
    // With w(s) = ubar(t - s, t) the adjoint equation reads
    //   w'(s) = i w(s) omega - Int_0^s w(r) g(s - r)^dagger dr,   w(0) = 1,
    // i.e. a right-multiplied Volterra equation. Its transpose is retarded again with
    // omega -> -omega^T and g -> conj(g), so the forward integrator applies.
    const double h = kernels.grid.step();
    const Index n = omega.rows();
    ComplexSeries kernel_conj = kernels.total_dissipation;
    kernel_conj.stacked() = kernel_conj.stacked().conjugate();
    const Eigen::MatrixXcd omega_t = omega.transpose();
    const auto sol = integrate_volterra(free_step(omega_t, h, +1.0), kernel_conj, h,
                                        Eigen::MatrixXcd::Identity(n, n), t_step);
    ComplexSeries out(t_step + 1, n, n);
    for (Index k = 0; k <= t_step; ++k) {
        out[k] = sol.values[t_step - k].transpose();
    }
    return out;
}

ComplexSeries noise_source_column(const KernelSet& kernels, const ComplexSeries& u, Index t_step) {
    const Index n = kernels.dim;
    const double h = kernels.grid.step();
    ComplexSeries out(t_step + 1, n, n);
    if (kernels.noise_vanishes || t_step == 0) {
        return out;
    }
    // Two-sided kernel gt(m) for m = -t..t laid side by side; block (m + t) = gt(m).
    Eigen::MatrixXcd two_sided(n, n * (2 * t_step + 1));
    for (Index m = -t_step; m <= t_step; ++m) {
        two_sided.middleCols(n * (m + t_step), n) = kernels.noise_at(m);
    }
    const ComplexSeries u_adj = u.adjoint();
    // W_k = h sum'_{s=0}^{t} gt(k - t + s) u(s)^dagger.
    for (Index k = 0; k <= t_step; ++k) {
        const Eigen::MatrixXcd full = two_sided.middleCols(n * k, n * (t_step + 1)) * u_adj.head(t_step + 1);
        out[k] = trapezoid(full, kernels.noise_at(k - t_step) * u_adj[0], kernels.noise_at(k) * u_adj[t_step], h);
    }
    return out;
}

ComplexSeries solve_v_column(const KernelSet& kernels, const Eigen::MatrixXcd& omega, const ComplexSeries& u,
                             Index t_step) {
    const Index n = omega.rows();
    const double h = kernels.grid.step();
    const ComplexSeries source = noise_source_column(kernels, u, t_step);
    return integrate_volterra(free_step(omega, h), kernels.total_dissipation, h, Eigen::MatrixXcd::Zero(n, n),
                              t_step, &source)
        .values;
}

ComplexSeries v_column_double_integral(const KernelSet& kernels, const ComplexSeries& u, Index t_step) {
    const Index n = kernels.dim;
    const double h = kernels.grid.step();
    const ComplexSeries w = noise_source_column(kernels, u, t_step);
    ComplexSeries out(t_step + 1, n, n);
    if (kernels.noise_vanishes) {
        return out;
    }
    const ComplexSeries u_head = [&] {
        ComplexSeries s(t_step + 1, n, n);
        s.stacked() = u.head(t_step + 1);
        return s;
    }();
    const Eigen::MatrixXcd u_rev = u_head.reversed_wide();
    for (Index k = 1; k <= t_step; ++k) {
        out[k] = convolve_at(u_rev, t_step, u_head, w, k, h);
    }
    return out;
}

PropagatorSet solve_propagators(const NetworkSpec& spec, const KernelSet& kernels) {
    const auto& grid = spec.grid;
    const double h = grid.step();
    const Index n = spec.dim();
    const Index steps = grid.n_steps;
    const Index last = steps;

    PropagatorSet props;
    props.grid = grid;
    props.output_steps = grid.output_steps();
    auto usol = solve_u(kernels, spec.frequencies);
    props.u = std::move(usol.values);
    props.memory_u = std::move(usol.memory);
    props.y = solve_y(kernels, spec).values;

    const Index outputs = props.outputs();
    const Index channels = kernels.channels();
    props.v_diag = ComplexSeries(outputs, n, n);

    // Memory integrals of u (every step) and y (at output) per channel.
    for (Index a = 0; a < channels; ++a) {
        const auto& g = kernels.dissipation[a];
        const Eigen::MatrixXcd g_rev = g.reversed_wide();
        ComplexSeries pu(steps + 1, n, n);
        for (Index k = 1; k <= steps; ++k) {
            pu[k] = convolve_at(g_rev, last, g, props.u, k, h);
        }
        ComplexSeries py(outputs, n, 1);
        for (Index o = 0; o < outputs; ++o) {
            py[o] = convolve_at(g_rev, last, g, props.y, props.output_steps[o], h);
        }
        props.channel_memory_u.push_back(std::move(pu));
        props.channel_memory_y.push_back(std::move(py));
        props.channel_memory_v.emplace_back(outputs, n, n);
        props.channel_noise_ubar.emplace_back(outputs, n, n);
    }

    if (kernels.noise_vanishes) {
        return props;
    }

    // Thermal part. With d = t - a the source column W(a, t) is built from
    //   Q_t[d] = sum_{s=0}^{t} gt(s - d) u(s)^dagger,
    // which is updated in O(t) per step: Q_t[d] = Q_{t-1}[d] + gt(t - d) u(t)^dagger for d < t,
    // and Q_t[t] = (sum_s u(s) gt(t - s))^dagger.
    const Eigen::MatrixXcd u_wide = props.u.wide();
    const ComplexSeries u_adj = props.u.adjoint();
    const Eigen::MatrixXcd gt_rev_tall = kernels.total_noise.reversed().stacked();
    const ComplexSeries gt_adj = kernels.total_noise.adjoint();
    std::vector<Eigen::MatrixXcd> chan_wide;
    std::vector<Eigen::MatrixXcd> chan_noise_wide;
    for (Index a = 0; a < channels; ++a) {
        chan_wide.push_back(props.channel_memory_u[a].wide());
        chan_noise_wide.push_back(kernels.noise[a].wide());
    }

    ComplexSeries q(steps + 1, n, n);
    Eigen::MatrixXcd w_prime;
    Index next_output = 0;
    for (Index t = 0; t <= steps; ++t) {
        if (t > 0) {
            q.head(t) += gt_rev_tall.middleRows(n * (last - t), n * t) * u_adj[t];
        }
        q[t] = (u_wide.leftCols(n * (t + 1)) * gt_rev_tall.middleRows(n * (last - t), n * (t + 1))).adjoint();

        if (next_output >= outputs || props.output_steps[next_output] != t) {
            continue;
        }
        const Index o = next_output++;
        if (t == 0) {
            continue;
        }
        // W(t - d, t) / h without the quadrature weights at the two ends of the s sum.
        w_prime = q.head(t + 1) - 0.5 * gt_adj.head(t + 1) -
                  0.5 * gt_rev_tall.middleRows(n * (last - t), n * (t + 1)) * u_adj[t];
        w_prime *= h;
        const auto w0 = w_prime.topRows(n);
        const auto wt = w_prime.bottomRows(n);
        props.v_diag[o] = trapezoid(u_wide.leftCols(n * (t + 1)) * w_prime, props.u[0] * w0, props.u[t] * wt, h);
        for (Index a = 0; a < channels; ++a) {
            const auto& pa = props.channel_memory_u[a];
            props.channel_memory_v[a][o] =
                trapezoid(chan_wide[a].leftCols(n * (t + 1)) * w_prime, pa[0] * w0, pa[t] * wt, h);
            const auto& gta = kernels.noise[a];
            props.channel_noise_ubar[a][o] = trapezoid(chan_noise_wide[a].leftCols(n * (t + 1)) * u_adj.head(t + 1),
                                                       gta[0] * u_adj[0], gta[t] * u_adj[t], h);
        }
    }
    return props;
}

double dyson_residual(const PropagatorSet& props, const Eigen::MatrixXcd& omega) {
    const double h = props.grid.step();
    const Index steps = props.grid.n_steps;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(omega);
    auto rotate = [&](Index k) {
        const double t = h * static_cast<double>(k);
        const Eigen::VectorXcd phases =
            (t * eig.eigenvalues()).unaryExpr([](double x) { return std::exp(I_UNIT * x); });
        return Eigen::MatrixXcd(eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint());
    };
    double worst = 0.0;
    for (Index k = 1; k < steps; ++k) {
        const Eigen::MatrixXcd r = (rotate(k + 1) * props.u[k + 1] - rotate(k - 1) * props.u[k - 1]) / (2.0 * h) +
                                   rotate(k) * props.memory_u[k];
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

void write_propagator_csv(const PropagatorSet& props, std::ostream& out) {
    const Index n = props.dim();
    out << "# photonet propagators v1\n";
    out << "t";
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out << ",re_u_" << i + 1 << '_' << j + 1 << ",im_u_" << i + 1 << '_' << j + 1;
        }
    }
    for (Index i = 0; i < n; ++i) {
        out << ",re_y_" << i + 1 << ",im_y_" << i + 1;
    }
    out << '\n';
    for (Index k : props.output_steps) {
        out << format_double(props.grid.time(k));
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                out << ',' << format_double(props.u[k](i, j).real()) << ','
                    << format_double(props.u[k](i, j).imag());
            }
        }
        for (Index i = 0; i < n; ++i) {
            out << ',' << format_double(props.y[k](i, 0).real()) << ',' << format_double(props.y[k](i, 0).imag());
        }
        out << '\n';
    }
}

} // namespace photonet
