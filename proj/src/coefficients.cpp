#include "photonet/coefficients.hpp"

#include <limits>

#include "photonet/csv.hpp"

namespace photonet {

namespace {

constexpr double NaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXcd nan_matrix(Index rows, Index cols) {
    return Eigen::MatrixXcd::Constant(rows, cols, cplx(NaN, NaN));
}

void write_entries(std::ostream& out, const std::string& prefix, const std::string& quantity,
                   const Eigen::MatrixXcd& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out << prefix << quantity << ',' << i + 1 << ',' << j + 1 << ',' << format_double(m(i, j).real()) << ','
                << format_double(m(i, j).imag()) << '\n';
        }
    }
}

} // namespace

double propagator_condition(const Eigen::MatrixXcd& u) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (smin == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return smax * std::max(1.0, smax) / smin;
}

std::vector<Eigen::MatrixXcd> compute_kappa(const PropagatorSet& props, Index o) {
    const Index k = props.output_steps[static_cast<std::size_t>(o)];
    const Eigen::MatrixXcd ut = props.u[k];
    if (propagator_condition(ut) > SINGULAR_PROPAGATOR_LIMIT) {
        throw SingularPropagatorError("u(t) is numerically singular at t = " + format_double(props.grid.time(k)),
                                      props.grid.time(k));
    }
    // kappa = P u^{-1}  <=>  u^T kappa^T = P^T.
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ut.transpose());
    std::vector<Eigen::MatrixXcd> out;
    for (Index a = 0; a < props.channels(); ++a) {
        out.push_back(lu.solve(props.channel_memory_u[a][k].transpose()).transpose());
    }
    return out;
}

std::vector<Eigen::MatrixXcd> compute_lambda(const PropagatorSet& props, Index o,
                                             const std::vector<Eigen::MatrixXcd>& kappa) {
    std::vector<Eigen::MatrixXcd> out;
    for (Index a = 0; a < props.channels(); ++a) {
        // Sign fixed by d/dt v(t,t) = -K v - v K^dagger + sum_a (lambda_a + lambda_a^dagger).
        out.push_back(props.channel_noise_ubar[a][o] - props.channel_memory_v[a][o] +
                      kappa[static_cast<std::size_t>(a)] * props.v_diag[o]);
    }
    return out;
}

std::vector<Eigen::VectorXcd> compute_feedback(const PropagatorSet& props, Index o,
                                               const std::vector<Eigen::MatrixXcd>& kappa) {
    const Index k = props.output_steps[static_cast<std::size_t>(o)];
    std::vector<Eigen::VectorXcd> out;
    for (Index a = 0; a < props.channels(); ++a) {
        out.push_back(I_UNIT * (kappa[static_cast<std::size_t>(a)] * props.y[k] - props.channel_memory_y[a][o]));
    }
    return out;
}

CoefficientTrace compute_coefficients(const NetworkSpec& spec, const PropagatorSet& props) {
    CoefficientTrace tr;
    const Index n = props.dim();
    const Index channels = props.channels();
    for (Index o = 0; o < props.outputs(); ++o) {
        const Index k = props.output_steps[static_cast<std::size_t>(o)];
        const double t = props.grid.time(k);
        tr.times.push_back(t);
        tr.condition.push_back(propagator_condition(props.u[k]));
        std::vector<Eigen::MatrixXcd> kappa;
        std::vector<Eigen::MatrixXcd> lambda;
        std::vector<Eigen::VectorXcd> feedback;
        bool singular = false;
        try {
            kappa = compute_kappa(props, o);
            lambda = compute_lambda(props, o, kappa);
            feedback = compute_feedback(props, o, kappa);
        } catch (const SingularPropagatorError&) {
            singular = true;
            kappa.assign(static_cast<std::size_t>(channels), nan_matrix(n, n));
            lambda.assign(static_cast<std::size_t>(channels), nan_matrix(n, n));
            feedback.assign(static_cast<std::size_t>(channels), nan_matrix(n, 1));
        }
        Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXcd gamma_noise = Eigen::MatrixXcd::Zero(n, n);
        Eigen::VectorXcd drive = drive_vector(spec, t);
        for (std::size_t a = 0; a < kappa.size(); ++a) {
            anti += kappa[a] - kappa[a].adjoint();
            gamma += 0.5 * (kappa[a] + kappa[a].adjoint());
            gamma_noise += lambda[a] + lambda[a].adjoint();
            drive += feedback[a];
        }
        tr.omega_eff.push_back(spec.frequencies - 0.5 * I_UNIT * anti);
        tr.gamma_eigenvalues.push_back(singular ? Eigen::VectorXd::Constant(n, NaN)
                                                : Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(gamma).eigenvalues());
        tr.gamma.push_back(std::move(gamma));
        tr.gamma_noise.push_back(std::move(gamma_noise));
        tr.drive_eff.push_back(std::move(drive));
        tr.kappa.push_back(std::move(kappa));
        tr.lambda.push_back(std::move(lambda));
        tr.feedback.push_back(std::move(feedback));
        tr.singular.push_back(singular);
    }
    return tr;
}

void write_coefficient_csv(const CoefficientTrace& trace, std::ostream& out) {
    out << "# photonet coefficients v1\n";
    out << "t,singular,channel,quantity,i,j,re,im\n";
    for (std::size_t o = 0; o < trace.times.size(); ++o) {
        const std::string head = format_double(trace.times[o]) + ',' + (trace.singular[o] ? "1" : "0") + ',';
        for (std::size_t a = 0; a < trace.kappa[o].size(); ++a) {
            const std::string prefix = head + std::to_string(a + 1) + ',';
            write_entries(out, prefix, "kappa", trace.kappa[o][a]);
            write_entries(out, prefix, "lambda", trace.lambda[o][a]);
            write_entries(out, prefix, "f", trace.feedback[o][a]);
        }
        const std::string prefix = head + "total,";
        write_entries(out, prefix, "omega_eff", trace.omega_eff[o]);
        write_entries(out, prefix, "gamma", trace.gamma[o]);
        write_entries(out, prefix, "gamma_noise", trace.gamma_noise[o]);
        write_entries(out, prefix, "f_eff", trace.drive_eff[o]);
        write_entries(out, prefix, "gamma_eigenvalue", trace.gamma_eigenvalues[o].cast<cplx>());
    }
}

} // namespace photonet
