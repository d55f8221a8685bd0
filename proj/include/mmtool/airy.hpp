#pragma once

#include <stdexcept>

namespace mmtool {

struct AiryValues {
    double X;
    double Ai, Bi, Aip, Bip;
};

// Evaluates Ai, Bi and derivatives on |X| <= 12 with relative error <= 1e-10.
// Maclaurin series summed in extended precision for |X| <= 9, asymptotic
// expansions beyond (where their truncation error is below double roundoff).
AiryValues airy_eval(double X);

double airy_wronskian_deviation(double X);  // |Ai Bi' - Ai' Bi - 1/pi|

}  // namespace mmtool
