#include "bgk/random_state.hpp"

#include "bgk/diagnostics.hpp"

namespace bgk {

FullState random_normalized_state(const PhaseSpace& ps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  FullState s;
  s.rho.resize(ps.n_space());
  for (Eigen::Index j = 0; j < s.rho.size(); ++j) s.rho(j) = unit(rng);
  s.g.resize(ps.n_space(), ps.n_velocity());
  for (Eigen::Index k = 0; k < s.g.cols(); ++k)
    for (Eigen::Index j = 0; j < s.g.rows(); ++j) s.g(j, k) = unit(rng);
  const Eigen::VectorXd m = g_moments(s.g, ps.velocity);
  s.g = m.cwiseInverse().asDiagonal() * s.g;
  return s;
}

}  // namespace bgk
