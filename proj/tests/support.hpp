// support.hpp — small spec builders shared by the unit tests

#pragma once

#include "photonet/runner.hpp"

namespace photonet::test {

// Two-CROW cavity on a shortened grid.
inline NetworkSpec short_two_crow(double eta, double drive_frequency, double temperature, double t_end,
                                  Index steps, Index output_every = 1) {
    NetworkSpec s = two_crow_spec(eta, drive_frequency, temperature);
    s.grid = TimeGrid{0.0, t_end, steps, output_every};
    return s;
}

// Two coupled resonators, each attached to its own semicircle waveguide plus a shared one.
inline NetworkSpec coupled_pair(double eta, double temperature, double t_end, Index steps, Index output_every = 1) {
    NetworkSpec s;
    s.frequencies.resize(2, 2);
    s.frequencies << 10.0, cplx(0.2, 0.05), cplx(0.2, -0.05), 10.3;
    s.drives.push_back(DrivingSignal{Monochromatic{2.0, 10.1, 0.3}, 0});
    Eigen::VectorXcd c1(2);
    c1 << 1.0, 0.0;
    Eigen::VectorXcd c2(2);
    c2 << cplx(0.4, 0.1), 1.0;
    s.waveguides.push_back(WaveguideSpec{"left", TightBindingSemicircle{9.8, 0.3, eta}, c1, temperature});
    s.waveguides.push_back(WaveguideSpec{"right", TightBindingSemicircle{10.4, 0.35, eta}, c2, temperature});
    s.initial_field = Eigen::VectorXcd::Zero(2);
    s.initial_field << cplx(0.5, -0.2), 0.3;
    s.initial_occupation = s.initial_field * s.initial_field.adjoint();
    s.initial_occupation(0, 0) += 0.4;
    s.initial_occupation(1, 1) += 0.1;
    s.grid = TimeGrid{0.0, t_end, steps, output_every};
    return s;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace photonet::test
