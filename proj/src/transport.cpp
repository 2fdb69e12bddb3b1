#include "photonet/transport.hpp"

#include <cmath>

namespace photonet {

Eigen::VectorXcd cavity_field(const PropagatorSet& props, const NetworkSpec& spec, Index k) {
    return props.u[k] * spec.initial_field + props.y[k];
}

Eigen::MatrixXcd occupation(const PropagatorSet& props, const NetworkSpec& spec, Index o) {
    const Index k = props.output_steps[static_cast<std::size_t>(o)];
    const Eigen::MatrixXcd u = props.u[k];
    const Eigen::VectorXcd y = props.y[k];
    const Eigen::VectorXcd a = cavity_field(props, spec, k);
    return u * spec.initial_occupation * u.adjoint() + props.v_diag[o] + a * y.adjoint() + y * a.adjoint() -
           y * y.adjoint();
}

ComplexSeries generalized_correlation(const KernelSet& kernels, const PropagatorSet& props, const NetworkSpec& spec,
                                      Index t_step) {
    const Index n = props.dim();
    const ComplexSeries v = v_column_double_integral(kernels, props.u, t_step);
    const Eigen::MatrixXcd ut = props.u[t_step];
    const Eigen::VectorXcd yt = props.y[t_step];
    const Eigen::VectorXcd& a0 = spec.initial_field;
    ComplexSeries out(t_step + 1, n, n);
    for (Index j = 0; j <= t_step; ++j) {
        const Eigen::MatrixXcd uj = props.u[j];
        const Eigen::VectorXcd yj = props.y[j];
        out[j] = uj * spec.initial_occupation * ut.adjoint() + v[j] + yj * yt.adjoint() + uj * a0 * yt.adjoint() +
                 yj * a0.adjoint() * ut.adjoint();
    }
    return out;
}

Eigen::MatrixXcd retarded_green(const PropagatorSet& props, Index k) {
    return -I_UNIT * props.u[k];
}

Eigen::MatrixXcd advanced_green(const PropagatorSet& props, Index tau_step, Index t_step) {
    if (tau_step > t_step) {
        throw RangeError("advanced Green function requested with tau after t");
    }
    return I_UNIT * props.u[t_step - tau_step].adjoint();
}

ComplexSeries lesser_green(const KernelSet& kernels, const PropagatorSet& props, const NetworkSpec& spec,
                           Index t_step) {
    ComplexSeries g = generalized_correlation(kernels, props, spec, t_step);
    g.stacked() *= I_UNIT;
    return g;
}

std::vector<Eigen::MatrixXcd> current_matrices(const PropagatorSet& props, const NetworkSpec& spec, Index o) {
    const Index k = props.output_steps[static_cast<std::size_t>(o)];
    const Eigen::MatrixXcd ut_adj = props.u[k].adjoint();
    const Eigen::VectorXcd yt = props.y[k];
    const Eigen::VectorXcd& a0 = spec.initial_field;
    std::vector<Eigen::MatrixXcd> out;
    for (Index a = 0; a < props.channels(); ++a) {
        const Eigen::MatrixXcd p = props.channel_memory_u[a][k];
        const Eigen::VectorXcd yg = props.channel_memory_y[a][o];
        // Int [g_a(t - s) rho(s, t) - gt_a(t - s) ubar(s, t)] ds with rho(s, t) expanded term by term.
        const Eigen::MatrixXcd m = p * spec.initial_occupation * ut_adj + props.channel_memory_v[a][o] +
                                   yg * yt.adjoint() + p * a0 * yt.adjoint() + yg * a0.adjoint() * ut_adj -
                                   props.channel_noise_ubar[a][o];
        out.push_back(m + m.adjoint());
    }
    return out;
}

double source_rate(const Eigen::VectorXcd& drive, const Eigen::VectorXcd& field) {
    return 2.0 * (drive.array() * field.array().conjugate()).sum().imag();
}

std::vector<double> time_derivative(const std::vector<double>& values, double spacing, std::vector<bool>& edge) {
    const std::size_t n = values.size();
    std::vector<double> d(n, 0.0);
    edge.assign(n, true);
    if (n < 2) {
        return d;
    }
    if (n == 2) {
        d[0] = d[1] = (values[1] - values[0]) / spacing;
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * spacing);
        edge[i] = false;
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * spacing);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * spacing);
    return d;
}

void fill_continuity(TransportTrace& trace, double spacing) {
    const auto dndt = time_derivative(trace.total_number, spacing, trace.edge);
    trace.residual.resize(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        trace.residual[i] = std::abs(dndt[i] - trace.source[i] + trace.currents[i].sum());
    }
}

TransportTrace compute_transport(const NetworkSpec& spec, const PropagatorSet& props) {
    TransportTrace tr;
    for (Index o = 0; o < props.outputs(); ++o) {
        const Index k = props.output_steps[static_cast<std::size_t>(o)];
        const double t = props.grid.time(k);
        const Eigen::VectorXcd a = cavity_field(props, spec, k);
        const Eigen::MatrixXcd rho = occupation(props, spec, o);
        auto mats = current_matrices(props, spec, o);
        Eigen::VectorXd currents(props.channels());
        for (std::size_t c = 0; c < mats.size(); ++c) {
            currents(static_cast<Index>(c)) = mats[c].trace().real();
        }
        const Eigen::VectorXd numbers = rho.diagonal().real();
        tr.times.push_back(t);
        tr.field.push_back(a);
        tr.source.push_back(source_rate(drive_vector(spec, t), a));
        tr.total_number.push_back(numbers.sum());
        tr.photon_numbers.push_back(numbers);
        tr.thermal_numbers.push_back(props.v_diag[o].diagonal().real());
        tr.occupation.push_back(rho);
        tr.currents.push_back(currents);
        tr.current_matrices.push_back(std::move(mats));
    }
    fill_continuity(tr, props.grid.step() * static_cast<double>(props.grid.output_every));
    return tr;
}

} // namespace photonet
