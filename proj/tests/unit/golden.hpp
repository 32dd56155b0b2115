#pragma once

// Frozen from tests/oracles/golden_constants.py (40-digit mpmath quadrature
// and bisection, independent of the library). Lifetime lognormal(9.3, 2.54).
namespace golden {

struct Single {
  double h, v, alpha, alpha_prime, c, k;
};

inline constexpr Single binary_split{1.6, 1.6, 0.051423287609284717, 0.069557997433369531,
                                     0.81159335391240727, 1.7373868454040292};
inline constexpr Single doubling{2.0, 2.0, 0.076456858312875084, 0.056539497558933667,
                                 0.73949543319663974, 1.0682324788841054};
inline constexpr double alpha_h5_3 = 0.055973152311343954;
inline constexpr double alpha_prime_h5_3 = 0.066971768932704275;
inline constexpr double c_h5_3 = 0.79766538262465349;
inline constexpr Single h6_5{1.2, 1.2, 0.019737736819612231, 0.09082380819496611,
                             0.92030620354325344, 5.0733355107617387};

// two types, N1 = 2 children each of type 2 w.p. 1/6
inline constexpr double c12_alpha1_less = 0.73949543319663974;
inline constexpr double c21_printed = 76.567320380233607;
inline constexpr double c21_renewal = 0.56976098758903821;

}  // namespace golden
