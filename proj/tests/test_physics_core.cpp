#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "lzsm/two_level.hpp"
#include "lzsm/units.hpp"

using namespace lzsm;

TEST(Constants, PlanckAndReducedPlanckAgree) {
    EXPECT_NEAR(constants.h_ueV_ps / (2.0 * std::numbers::pi * constants.hbar_ueV_ps), 1.0, 1e-12);
    EXPECT_NEAR(constants.h_ueV_ps, 1e3 * constants.h_ueV_per_GHz, 1e-9);
}

TEST(Constants, PhotonEnergyAt34GHz) { EXPECT_NEAR(photon_energy(34.0), 140.61, 0.01); }

TEST(EnergyLevels, Examples) {
    auto e = energy_levels(0.0, 98.0);
    EXPECT_DOUBLE_EQ(e.lower_ueV, -49.0);
    EXPECT_DOUBLE_EQ(e.upper_ueV, 49.0);
    e = energy_levels(98.0, 98.0);
    EXPECT_NEAR(e.upper_ueV, 49.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(e.upper_ueV, 69.296, 1e-3);
    EXPECT_NEAR(energy_levels(140.61, 98.0).upper_ueV, 85.69, 0.01);
}

TEST(EnergyLevels, SymmetricInDetuningAndParticleHole) {
    for (double eps = -1000.0; eps <= 1000.0; eps += 37.3) {
        const auto a = energy_levels(eps, 98.0);
        const auto b = energy_levels(-eps, 98.0);
        EXPECT_EQ(a.upper_ueV, -a.lower_ueV);
        EXPECT_EQ(a.upper_ueV, b.upper_ueV);
    }
}

TEST(EnergyLevels, RejectsBadInput) {
    EXPECT_THROW(energy_levels(std::numeric_limits<double>::quiet_NaN(), 98.0), PreconditionError);
    EXPECT_THROW(energy_levels(0.0, 0.0), PreconditionError);
    EXPECT_THROW(energy_gap(std::numeric_limits<double>::infinity(), 98.0), PreconditionError);
}

TEST(EnergyGap, ExamplesAndLowerBound) {
    EXPECT_DOUBLE_EQ(energy_gap(0.0, 98.0), 98.0);
    EXPECT_NEAR(energy_gap(98.0, 98.0), 138.59, 0.01);
    EXPECT_NEAR(energy_gap(-140.61, 98.0), 171.39, 0.01);
    for (double eps = -500.0; eps <= 500.0; eps += 0.7) {
        EXPECT_GE(energy_gap(eps, 98.0), 98.0);
        if (eps != 0.0) {
            EXPECT_GT(energy_gap(eps, 98.0), 98.0);
        }
    }
}

TEST(AvgOccupation, Examples) {
    EXPECT_DOUBLE_EQ(avg_occupation(0.0, 98.0, 1.0), 0.5);
    EXPECT_NEAR(avg_occupation(98.0, 98.0, 1.0), 0.5 * (1.0 + 1.0 / std::sqrt(2.0)), 1e-12);
    EXPECT_NEAR(avg_occupation(98.0, 98.0, 1.0), 0.8536, 1e-4);
    EXPECT_NEAR(avg_occupation(1e6, 98.0, 1.0), 1.0, 1e-8);
    EXPECT_DOUBLE_EQ(avg_occupation(0.0, 98.0, -0.3), 0.5);
    EXPECT_THROW(avg_occupation(0.0, 98.0, 1.5), PreconditionError);
    EXPECT_THROW(avg_occupation(0.0, 98.0, -1.01), PreconditionError);
}

TEST(AvgOccupation, MonotoneForNonNegativeZ) {
    for (double z : {0.0, 0.3, 1.0}) {
        double prev = avg_occupation(-2000.0, 98.0, z);
        for (double eps = -2000.0; eps <= 2000.0; eps += 3.1) {
            const double n = avg_occupation(eps, 98.0, z);
            EXPECT_GE(n, prev - 1e-15);
            EXPECT_GE(n, 0.0);
            EXPECT_LE(n, 1.0);
            prev = n;
        }
    }
}

TEST(LandauZener, Examples) {
    QubitParams q;
    DriveParams d;
    d.a_mw_ueV = 500.0;
    EXPECT_NEAR(landau_zener_probability(q, d), 0.807, 1e-3);
    d.a_mw_ueV = 98.0;
    EXPECT_NEAR(landau_zener_probability(q, d), 0.334, 1e-3);
    q.delta_c_ueV = 1e-9;
    EXPECT_NEAR(landau_zener_probability(q, d), 1.0, 1e-15);
}

TEST(LandauZener, ZeroAmplitudeRejected) {
    DriveParams d;
    d.a_mw_ueV = 0.0;
    EXPECT_THROW(landau_zener_probability(QubitParams{}, d), PreconditionError);
}

TEST(LandauZener, Monotonicity) {
    QubitParams q;
    DriveParams d;
    double prev = 0.0;
    for (double a = 10.0; a <= 2000.0; a *= 1.3) {
        d.a_mw_ueV = a;
        const double p = landau_zener_probability(q, d);
        EXPECT_GT(p, prev);
        EXPECT_LE(p, 1.0);
        prev = p;
    }
    d.a_mw_ueV = 300.0;
    prev = 0.0;
    for (double f = 1.0; f <= 100.0; f *= 1.5) {
        d.f_mw_GHz = f;
        const double p = landau_zener_probability(q, d);
        EXPECT_GT(p, prev);
        prev = p;
    }
    d.f_mw_GHz = 34.0;
    prev = 1.0;
    for (double dc = 10.0; dc <= 300.0; dc += 10.0) {
        q.delta_c_ueV = dc;
        const double p = landau_zener_probability(q, d);
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(GateConversion, Examples) {
    QubitParams q;
    q.v_g0_V = 0.731;
    EXPECT_DOUBLE_EQ(detuning_from_gate(q.v_g0_V, q), 0.0);
    EXPECT_NEAR(detuning_from_gate(q.v_g0_V + 1e-3, q), 250.0, 1e-9);
    EXPECT_NEAR(detuning_from_gate(q.v_g0_V - 4e-3, q), -1000.0, 1e-9);
    EXPECT_NEAR(gate_from_detuning(detuning_from_gate(0.7352, q), q), 0.7352, 1e-15);
}

TEST(GateConversion, ExactlyLinear) {
    QubitParams q;
    for (double v : {1e-4, 3e-3, -2e-2})
        for (double a : {2.0, 4.0, 0.5}) EXPECT_DOUBLE_EQ(detuning_from_gate(a * v, q), a * detuning_from_gate(v, q));
}

TEST(SourceAmplitude, Examples) {
    DriveParams d;
    EXPECT_DOUBLE_EQ(amplitude_from_source_voltage(0.0, d), 0.0);
    EXPECT_NEAR(amplitude_from_source_voltage(1.0, d), 460.0, 1e-9);
    EXPECT_NEAR(amplitude_from_source_voltage(0.5, d), 230.0, 1e-9);
    EXPECT_THROW(amplitude_from_source_voltage(-0.1, d), PreconditionError);
    for (double a : {2.0, 4.0, 0.25})
        EXPECT_DOUBLE_EQ(amplitude_from_source_voltage(a * 0.37, d), a * amplitude_from_source_voltage(0.37, d));
}

TEST(AdiabaticRegime, Examples) {
    QubitParams q;
    auto r = check_adiabatic_regime(q, 0.2, 355.0);
    EXPECT_NEAR(r.thermal_ratio, 5.69, 0.01);
    EXPECT_NEAR(r.rf_ratio, 66.7, 0.1);
    EXPECT_TRUE(r.adiabatic);
    EXPECT_FALSE(check_adiabatic_regime(q, 1e9, 355.0).adiabatic);
    r = check_adiabatic_regime(q, 0.2, 355.0, 10.0);
    EXPECT_FALSE(r.adiabatic);
    EXPECT_THROW(check_adiabatic_regime(q, 0.0, 355.0), PreconditionError);
}

TEST(Params, Validation) {
    QubitParams q;
    q.delta_c_ueV = -1.0;
    EXPECT_THROW(q.validate(), PreconditionError);
    q = {};
    q.alpha = 1.2;
    EXPECT_THROW(q.validate(), PreconditionError);
    DecoherenceParams d{100.0, 250.0};
    EXPECT_NO_THROW(d.validate());
    EXPECT_FALSE(d.is_physical());
    EXPECT_THROW(d.validate_physical(), PreconditionError);
}
