// Generated by tests/oracles/gen_reference_values.py. Do not edit.
#pragma once

#include <array>
#include <complex>

namespace bondgauge::oracle {

struct QuantileCase { int kind; int d1; int d2; double upper_tail; double expected; };
inline constexpr std::array<QuantileCase, 30> kQuantileCases{{
    QuantileCase{0, 1, 0, 0.05, np.float64(3.8414588206941285)},
    QuantileCase{0, 2, 0, 0.3678794411714423, np.float64(2.0000000000000004)},
    QuantileCase{0, 5, 0, 0.5, np.float64(4.351460191095526)},
    QuantileCase{0, 10, 0, 0.01, np.float64(23.20925115895436)},
    QuantileCase{0, 50, 0, 0.975, np.float64(32.357363695658655)},
    QuantileCase{0, 95, 0, 0.05, np.float64(118.75161175336737)},
    QuantileCase{0, 100, 0, 0.05, np.float64(124.34211340400408)},
    QuantileCase{0, 100, 0, 0.95, np.float64(77.92946516501726)},
    QuantileCase{0, 200, 0, 0.001, np.float64(267.5405278227572)},
    QuantileCase{0, 3, 0, 0.9, np.float64(0.5843743741551831)},
    QuantileCase{1, 1, 10, 0.05, np.float64(4.9646027437307145)},
    QuantileCase{1, 2, 58, 0.01, np.float64(4.9909666284709235)},
    QuantileCase{1, 5, 95, 0.05, np.float64(2.31022484517252)},
    QuantileCase{1, 5, 95, 0.042, np.float64(2.409637347925209)},
    QuantileCase{1, 2, 8, 0.01, np.float64(8.649110640673515)},
    QuantileCase{1, 2, 18, 0.01, np.float64(6.012904834800529)},
    QuantileCase{1, 2, 58, 0.005, np.float64(5.813193163651966)},
    QuantileCase{1, 10, 20, 0.5, np.float64(0.9662638885929161)},
    QuantileCase{1, 3, 7, 0.1, np.float64(3.074071993909001)},
    QuantileCase{1, 20, 200, 0.025, np.float64(1.7780067495744791)},
    QuantileCase{2, 1, 0, 0.25, np.float64(1.0000000000133888)},
    QuantileCase{2, 5, 0, 0.05, np.float64(2.0150483733330233)},
    QuantileCase{2, 10, 0, 0.005, np.float64(3.1692726726169504)},
    QuantileCase{2, 30, 0, 0.025, np.float64(2.042272456301238)},
    QuantileCase{2, 95, 0, 0.025, np.float64(1.9852510035091893)},
    QuantileCase{2, 95, 0, 0.0202020202020202, np.float64(2.078024541627785)},
    QuantileCase{2, 200, 0, 0.1, np.float64(1.2857987939945952)},
    QuantileCase{2, 60, 0, 0.01, np.float64(2.390119472624913)},
    QuantileCase{2, 2, 0, 0.05, np.float64(2.919985580355518)},
    QuantileCase{2, 1000, 0, 0.025, np.float64(1.9623390808264078)},
}};

struct CpCase { int successes; int trials; double confidence; double lower; double upper; };
inline constexpr std::array<CpCase, 8> kClopperPearsonCases{{
    CpCase{1900, 2000, 0.95, np.float64(0.939518277916848), np.float64(0.9591357322817486)},
    CpCase{0, 50, 0.95, 0.0, np.float64(0.07112173646419764)},
    CpCase{50, 50, 0.95, np.float64(0.9288782635358024), 1.0},
    CpCase{10, 10, 0.95, np.float64(0.6915028921812392), 1.0},
    CpCase{480, 500, 0.95, np.float64(0.9388973906117553), np.float64(0.9753986879144546)},
    CpCase{7, 200, 0.99, np.float64(0.010289183813943588), np.float64(0.08351637307554176)},
    CpCase{1, 2000, 0.95, np.float64(1.26588238685579e-05), np.float64(0.0027826398346589465)},
    CpCase{250, 500, 0.9, np.float64(0.4622923096529466), np.float64(0.5377076903470535)},
}};

// R at the typical parameter setting, omega = 2*pi*4e6 rad/s, default materials.
inline constexpr std::complex<double> kReflectionTypical4MHz{1.0765744618758235, 0.36261443060308461};

// Phase response (deg) at the typical setting on the default grid
// (100 points, 2-8 MHz linear in Hz, converted to rad/s).
inline constexpr std::array<double, 100> kPhaseTypicalDefaultGrid{{
    114.27844218570553, 117.13695387910321, 120.02647274089841, 122.94501908242884,
    125.89076559721873, 128.86202318303614, 131.85722834258493, 134.87493194641484,
    137.91378917910323, 140.97255051917301, 144.05005362659617, 147.14521603055841,
    150.25702852549443, 153.38454919602903, 156.52689800196076, 159.68325186323649,
    162.85284019232214, 166.03494082772869, 169.22887632790309, 172.43401058939499,
    175.64974575728576, 178.87551939941518, 182.11080191904287, 185.35509418330233,
    188.60792534719854, 191.86885085501164, 195.13745060283564, 198.41332724763566,
    201.69610464967582, 204.98542643647648, 208.28095467762386, 211.58236866079343,
    214.88936376027744, 218.20165039013702, 221.51895303484447, 224.84100935094846,
    228.16756933389526, 231.49839454467846, 234.83325739147498, 238.17194046186332,
    241.51423590161457, 244.85994483640343, 248.20887683310909, 251.56084939766743,
    254.91568750670081, 258.27322317039123, 261.63329502428067, 264.99574794788039,
    268.36043270815104, 271.72720562607973, 275.09592826472992, 278.46646713727692,
    281.83869343366671, 285.21248276465067, 288.58771492205391, 291.96427365423146,
    295.34204645575572, 298.72092437046061, 302.10080180704379, 305.48157636649859,
    308.86314868071282, 312.24542226163240, 315.62830336044474, 319.01170083629032,
    322.39552603406111, 325.77969267089211, 329.16411673099762, 332.54871636854700,
    335.93341181831603, 339.31812531389033, 342.70278101323602, 346.08730493149117,
    349.47162488086887, 352.85567041760016, 356.23937279588247, 359.62266492883628,
    363.00548135651105, 366.38775822102020, 369.76943324892454, 373.15044574102517,
    376.53073656976943, 379.91024818451876, 383.28892462497435, 386.66671154310698,
    390.04355623399016, 393.41940767599313, 396.79421658085082, 400.16793545419361,
    403.54051866719048, 406.91192254003565, 410.28210543809204, 413.65102788159496,
    417.01865266991821, 420.38494502151218, 423.74987273074121, 427.11340634297636,
    430.47551934944151, 433.83618840346594, 437.19539355996805, 440.55311854018349,
}};

}  // namespace bondgauge::oracle
