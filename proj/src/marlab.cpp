#include "missnet/marlab.hpp"

#include <cmath>
#include <stdexcept>

namespace missnet {

namespace {

constexpr double kTol = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kTol; }

}  // namespace

std::string to_string(PairClass c) {
    switch (c) {
        case PairClass::MCAR: return "MCAR";
        case PairClass::MARConsistent: return "MAR-consistent";
        case PairClass::MNAR: return "MNAR";
    }
    return "unknown";
}

void PairMechanism::validate() const {
    for (int c = 0; c < 4; ++c) {
        double sum = 0.0;
        for (int o = 0; o < 4; ++o) {
            double v = table[c][o];
            if (!(v >= -kTol && v <= 1.0 + kTol))
                throw std::invalid_argument("PairMechanism: probability outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("PairMechanism: cell probabilities do not sum to 1");
    }
}

PairMechanism build_mar_pair(const std::array<double, 2>& g10_of_xik,
                             const std::array<double, 2>& g01_of_xij, double g11) {
    for (double v : g10_of_xik)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("build_mar_pair: g10 outside [0,1]");
    for (double v : g01_of_xij)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("build_mar_pair: g01 outside [0,1]");
    if (!(g11 >= 0.0 && g11 <= 1.0)) throw std::invalid_argument("build_mar_pair: g11 outside [0,1]");

    PairMechanism mech;
    for (int x_ij = 0; x_ij < 2; ++x_ij)
        for (int x_ik = 0; x_ik < 2; ++x_ik) {
            double g10 = g10_of_xik[x_ik];
            double g01 = g01_of_xij[x_ij];
            double g00 = 1.0 - g10 - g01 - g11;
            if (g00 < -kTol)
                throw std::invalid_argument("build_mar_pair: g10+g01+g11 exceeds 1 on a cell");
            int c = PairMechanism::cell(x_ij, x_ik);
            mech.table[c][PairMechanism::outcome(0, 0)] = std::max(0.0, g00);
            mech.table[c][PairMechanism::outcome(0, 1)] = g01;
            mech.table[c][PairMechanism::outcome(1, 0)] = g10;
            mech.table[c][PairMechanism::outcome(1, 1)] = g11;
        }
    mech.validate();
    return mech;
}

PairMechanism build_independent_pair(const std::array<double, 2>& g1plus_of_xij,
                                     const std::array<double, 2>& gplus1_of_xik) {
    for (double v : g1plus_of_xij)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("build_independent_pair: g1+ outside [0,1]");
    for (double v : gplus1_of_xik)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("build_independent_pair: g+1 outside [0,1]");

    PairMechanism mech;
    for (int x_ij = 0; x_ij < 2; ++x_ij)
        for (int x_ik = 0; x_ik < 2; ++x_ik) {
            double a = g1plus_of_xij[x_ij];
            double b = gplus1_of_xik[x_ik];
            int c = PairMechanism::cell(x_ij, x_ik);
            mech.table[c][PairMechanism::outcome(1, 1)] = a * b;
            mech.table[c][PairMechanism::outcome(1, 0)] = a * (1.0 - b);
            mech.table[c][PairMechanism::outcome(0, 1)] = (1.0 - a) * b;
            mech.table[c][PairMechanism::outcome(0, 0)] = (1.0 - a) * (1.0 - b);
        }
    mech.validate();
    return mech;
}

PairClass check_mar(const PairMechanism& mech) {
    mech.validate();

    bool all_constant = true;
    for (int o = 0; o < 4 && all_constant; ++o)
        for (int c = 1; c < 4; ++c)
            if (!close(mech.table[c][o], mech.table[0][o])) {
                all_constant = false;
                break;
            }
    if (all_constant) return PairClass::MCAR;

    // g10 may vary only with x_ik: equal across x_ij for each x_ik.
    bool mar = true;
    for (int x_ik = 0; x_ik < 2; ++x_ik)
        mar = mar && close(mech.prob(0, x_ik, 1, 0), mech.prob(1, x_ik, 1, 0));
    // g01 may vary only with x_ij.
    for (int x_ij = 0; x_ij < 2; ++x_ij)
        mar = mar && close(mech.prob(x_ij, 0, 0, 1), mech.prob(x_ij, 1, 0, 1));
    // g11 constant.
    for (int c = 1; c < 4; ++c)
        mar = mar && close(mech.table[c][PairMechanism::outcome(1, 1)],
                           mech.table[0][PairMechanism::outcome(1, 1)]);
    return mar ? PairClass::MARConsistent : PairClass::MNAR;
}

PairMarginals marginals(const PairMechanism& mech) {
    PairMarginals out;
    for (int c = 0; c < 4; ++c) {
        out.g1plus[c] = mech.table[c][PairMechanism::outcome(1, 1)] +
                        mech.table[c][PairMechanism::outcome(1, 0)];
        out.gplus1[c] = mech.table[c][PairMechanism::outcome(1, 1)] +
                        mech.table[c][PairMechanism::outcome(0, 1)];
    }
    return out;
}

}  // namespace missnet
