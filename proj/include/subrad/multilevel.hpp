#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "subrad/params.hpp"
#include "subrad/scattering.hpp"

namespace subrad {

enum class Polarization { sigma_minus = -1, pi = 0, sigma_plus = +1 };

// F=2 <-> F'=3 Zeeman manifold with its transition coefficients.
//
// cg(m, q) is the Clebsch-Gordan coefficient <2, m; 1, q | 3, m+q> in the
// convention where the stretched transition (2,2) -> (3,3) has coefficient 1.
// With this convention the decay branching from any excited sublevel sums to
// one exactly, sum_q cg(m'-q, q)^2 = 1, while the absorption strength from a
// ground sublevel sums to the m-independent constant 7/5.
struct LevelScheme {
    int f_ground = 2;
    int f_excited = 3;
    double gamma = two_pi * 3.0e6;
    // table[m+2][q+1] = cg(m, q), m in -2..2, q in -1..1
    std::array<std::array<double, 3>, 5> table{};

    double cg(int m, int q) const;
    double cg_sq(int m, int q) const { double c = cg(m, q); return c * c; }
};

// Probabilities over the ground sublevels m_F = -2..+2.
struct PopulationDistribution {
    std::array<double, 5> p = {0.2, 0.2, 0.2, 0.2, 0.2};

    double operator()(int m) const { return p[static_cast<std::size_t>(m + 2)]; }
    static PopulationDistribution uniform() { return {}; }
    void validate() const;
};

// Builds the F=2 -> F'=3 table from the closed-form j2 = 1 coupling
// formulas.  Validated in the test suite against an independent Racah-sum
// Wigner 3-j evaluation.
LevelScheme clebsch_gordan_table(double gamma = two_pi * 3.0e6);

// Column-stochastic matrix of the single-scattering-event chain:
// T[m'+2][m+2] is the probability that one absorb-and-decay event takes the
// ground sublevel m to m'.
std::array<std::array<double, 5>, 5>
pumping_transition_matrix(const LevelScheme& scheme, const std::set<Polarization>& drive);

// Stationary distribution of the single-scattering-event Markov chain:
// absorb one of the driven polarizations with weight ~ cg(m, q)^2, then
// decay with the excited-state branching ratios.  Power iteration to
// max-norm residual < 1e-12.
PopulationDistribution pumping_steady_state(const LevelScheme& scheme,
                                            const std::set<Polarization>& drive);

// g_eff = g_max sqrt( sum_m p(m) c_y^2(m) ) with the y coupling decomposed
// as y = (sigma+ - sigma-)/sqrt(2):  c_y^2(m) = (cg(m,+1)^2 + cg(m,-1)^2)/2.
double effective_coupling(const LevelScheme& scheme, const PopulationDistribution& pop,
                          double g_max);

// Squared Raman branching weight of a ground sublevel: absorb sigma+- from
// the drive, emit a z-polarized (pi) cavity photon, end in a different
// sublevel.  B^2(m) = sum_{q=+-1} cg(m,q)^2 cg(m+q, 0)^2.
double raman_branching_sq(const LevelScheme& scheme, int m);

// z-polarized channel for one ensemble: incoherent per-atom sum with the
// collective denominator,
//   I_z(Delta) = sum_a | eta g w_a cos(k x_a) B_a / D(Delta) |^2 ,
// no cos(k z_a) interference phase across atoms.  The coupling g is
// effective_coupling(scheme, pop, params.g_max).
SpectrumResult raman_spectrum(const AtomEnsemble& ensemble, const SystemParams& params,
                              const DriveParams& drive, const LevelScheme& scheme,
                              const PopulationDistribution& pop,
                              const std::vector<double>& grid);

// Ensemble-averaged z channel, mirroring sweep_spectrum's sampling scheme.
SpectrumResult raman_sweep(const SystemParams& params, const DriveParams& drive_template,
                           int n_atoms, const std::vector<double>& grid,
                           int n_realizations, std::uint64_t seed,
                           const LevelScheme& scheme, const PopulationDistribution& pop,
                           const SweepOptions& options = {});

// 15-row CSV dump (m_F, q, coefficient) for audit.
std::string cg_table_csv(const LevelScheme& scheme);

} // namespace subrad
