#pragma once

#include <array>
#include <utility>

namespace fracrecon::reference {

// Published reconstructions: per nu, (nu1, second) for FTN, STN, TTN noise at
// delta = 0.01 (coarse) and delta = 0.001 (fine).
struct Row {
    double nu;
    std::array<std::array<double, 2>, 3> coarse;
    std::array<std::array<double, 2>, 3> fine;
};

inline constexpr std::array<Row, 9> kFip{{
    {0.1, {{{0.0998, 0.0279}, {0.0977, 0.0320}, {0.0902, 0.0792}}}, {{{0.1000, 0.0305}, {0.0998, 0.0309}, {0.0990, 0.0367}}}},
    {0.2, {{{0.1999, 0.0608}, {0.1977, 0.0662}, {0.1902, 0.1027}}}, {{{0.2000, 0.0650}, {0.1998, 0.0654}, {0.1990, 0.0696}}}},
    {0.3, {{{0.2996, 0.1091}, {0.2980, 0.1106}, {0.2902, 0.1210}}}, {{{0.3000, 0.1004}, {0.2998, 0.1007}, {0.2990, 0.1037}}}},
    {0.4, {{{0.3995, 0.1513}, {0.3981, 0.1538}, {0.3902, 0.1526}}}, {{{0.3999, 0.1346}, {0.3998, 0.1349}, {0.3990, 0.1369}}}},
    {0.5, {{{0.4998, 0.1814}, {0.4985, 0.1807}, {0.4903, 0.1802}}}, {{{0.5000, 0.1681}, {0.4998, 0.1681}, {0.4990, 0.1684}}}},
    {0.6, {{{0.5987, 0.2074}, {0.5980, 0.2039}, {0.5902, 0.2159}}}, {{{0.5998, 0.1982}, {0.5998, 0.1981}, {0.5990, 0.1992}}}},
    {0.7, {{{0.6983, 0.2476}, {0.6980, 0.2444}, {0.6902, 0.2519}}}, {{{0.6997, 0.2325}, {0.6998, 0.2323}, {0.6990, 0.2334}}}},
    {0.8, {{{0.7953, 0.2756}, {0.7977, 0.2908}, {0.7902, 0.2906}}}, {{{0.7996, 0.2708}, {0.7998, 0.2706}, {0.7990, 0.2722}}}},
    {0.9, {{{0.8932, 0.3192}, {0.8973, 0.3182}, {0.8902, 0.3353}}}, {{{0.8993, 0.2993}, {0.8997, 0.2990}, {0.8990, 0.3016}}}},
}};

inline constexpr std::array<Row, 4> kSip{{
    {0.1, {{{0.0998, 0.8121}, {0.0977, 0.8120}, {0.0901, 0.8096}}}, {{{0.1000, 0.8121}, {0.0998, 0.8121}, {0.0990, 0.8098}}}},
    {0.4, {{{0.3962, 0.8525}, {0.3952, 0.8523}, {0.3866, 0.8524}}}, {{{0.3963, 0.8525}, {0.3962, 0.8524}, {0.3953, 0.8525}}}},
    {0.6, {{{0.6011, 0.8684}, {0.6004, 0.8680}, {0.5919, 0.8688}}}, {{{0.6016, 0.8682}, {0.6015, 0.8682}, {0.6006, 0.8683}}}},
    {0.9, {{{0.8940, 0.8972}, {0.8977, 0.8968}, {0.8895, 0.8971}}}, {{{0.8987, 0.8970}, {0.8991, 0.8970}, {0.8982, 0.8970}}}},
}};

// Leading-order pre-limit values (nu1, nu_{1,a}) reported for the ex74 problem;
// the evaluation time behind them is not known.
inline constexpr std::array<std::pair<double, double>, 8> kEx74LeadingOrder{{
    {0.1, 0.0867},
    {0.2, 0.1877},
    {0.3, 0.2920},
    {0.4, 0.3890},
    {0.5, 0.4894},
    {0.6, 0.5904},
    {0.7, 0.6881},
    {0.8, 0.7878},
}};

}  // namespace fracrecon::reference
