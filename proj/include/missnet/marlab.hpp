#ifndef MISSNET_MARLAB_HPP
#define MISSNET_MARLAB_HPP

#include <array>
#include <string>

namespace missnet {

// Joint missingness mechanism for a pair of tie variables (x_ij, x_ik):
// Pr(d_ij = r, d_ik = s | x_ij, x_ik) stored as an explicit probability
// table. Cell index: 2*x_ij + x_ik; outcome index: 2*r + s.
struct PairMechanism {
    std::array<std::array<double, 4>, 4> table{};

    static int cell(int x_ij, int x_ik) { return 2 * x_ij + x_ik; }
    static int outcome(int r, int s) { return 2 * r + s; }

    double prob(int x_ij, int x_ik, int r, int s) const { return table[cell(x_ij, x_ik)][outcome(r, s)]; }

    // All entries in [0,1] and each cell's four outcomes sum to 1.
    void validate() const;
};

enum class PairClass { MCAR, MARConsistent, MNAR };

std::string to_string(PairClass c);

// MAR construction: g10 a function of x_ik only, g01 of x_ij only, g11
// constant; g00 filled in by the rule of complements. The component
// arguments are indexed by the variable they may depend on.
PairMechanism build_mar_pair(const std::array<double, 2>& g10_of_xik,
                             const std::array<double, 2>& g01_of_xij, double g11);

// Product construction from per-variable marginals g1+(x_ij) and g+1(x_ik):
// each indicator drawn independently with its own-variable probability.
PairMechanism build_independent_pair(const std::array<double, 2>& g1plus_of_xij,
                                     const std::array<double, 2>& gplus1_of_xik);

// MCAR iff all four outcome probabilities are cell-constant; MAR-consistent
// iff g10 varies only with x_ik, g01 only with x_ij, and g11 is constant;
// MNAR otherwise.
PairClass check_mar(const PairMechanism& mech);

// Row/column marginal tables per cell: g1+ = g11 + g10, g+1 = g11 + g01.
struct PairMarginals {
    std::array<double, 4> g1plus{};
    std::array<double, 4> gplus1{};
};

PairMarginals marginals(const PairMechanism& mech);

}  // namespace missnet

#endif
