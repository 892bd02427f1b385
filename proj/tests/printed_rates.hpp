#pragma once

// Printed (DFAR, DFRR, DAc) triples of the twelve-user comparison table,
// used only to check the dynamic-accuracy identity.

#include <array>

namespace fixture {

struct PrintedRow {
    const char* system;
    const char* classifier;
    const char* setup;
    double dfar, dfrr, dac;
};

inline constexpr std::array<PrintedRow, 48> kPrintedRates{{
    {"Acceleration", "kNNEuc", "P1S1-P1S2", 9.91, 3.85, 93.1},
    {"Acceleration", "kNNEuc", "P2S1-P2S2", 8.49, 3.69, 93.9},
    {"Acceleration", "kNNEuc", "P1S1-P2S1", 16.04, 22.76, 80.6},
    {"Acceleration", "kNNEuc", "P1S1-P2S2", 13.68, 23.24, 81.6},
    {"Acceleration", "LogReg", "P1S1-P1S2", 16.04, 3.21, 90.3},
    {"Acceleration", "LogReg", "P2S1-P2S2", 12.58, 3.85, 91.8},
    {"Acceleration", "LogReg", "P1S1-P2S1", 17.45, 8.81, 86.8},
    {"Acceleration", "LogReg", "P1S1-P2S2", 21.23, 11.06, 83.8},
    {"Acceleration", "MulPer", "P1S1-P1S2", 17.45, 2.08, 90.2},
    {"Acceleration", "MulPer", "P2S1-P2S2", 15.57, 3.53, 90.4},
    {"Acceleration", "MulPer", "P1S1-P2S1", 22.48, 6.89, 85.2},
    {"Acceleration", "MulPer", "P1S1-P2S2", 25.16, 7.37, 83.7},
    {"Acceleration", "RanFor", "P1S1-P1S2", 18.4, 3.85, 88.8},
    {"Acceleration", "RanFor", "P2S1-P2S2", 22.8, 4.01, 86.5},
    {"Acceleration", "RanFor", "P1S1-P2S1", 30.5, 3.69, 82.8},
    {"Acceleration", "RanFor", "P1S1-P2S2", 26.42, 4.81, 84.3},
    {"Rotation", "kNNEuc", "P1S1-P1S2", 8.81, 8.01, 91.6},
    {"Rotation", "kNNEuc", "P2S1-P2S2", 9.75, 4.33, 92.9},
    {"Rotation", "kNNEuc", "P1S1-P2S1", 16.19, 17.95, 82.9},
    {"Rotation", "kNNEuc", "P1S1-P2S2", 15.09, 26.92, 79.1},
    {"Rotation", "LogReg", "P1S1-P1S2", 13.05, 5.61, 90.6},
    {"Rotation", "LogReg", "P2S1-P2S2", 12.89, 3.69, 91.7},
    {"Rotation", "LogReg", "P1S1-P2S1", 16.67, 20.67, 81.4},
    {"Rotation", "LogReg", "P1S1-P2S2", 16.35, 27.72, 78},
    {"Rotation", "MulPer", "P1S1-P1S2", 16.67, 5.61, 88.8},
    {"Rotation", "MulPer", "P2S1-P2S2", 13.99, 2.4, 91.8},
    {"Rotation", "MulPer", "P1S1-P2S1", 22.01, 18.59, 79.7},
    {"Rotation", "MulPer", "P1S1-P2S2", 24.37, 25.32, 75.2},
    {"Rotation", "RanFor", "P1S1-P1S2", 15.57, 2.24, 91},
    {"Rotation", "RanFor", "P2S1-P2S2", 15.88, 4.33, 89.8},
    {"Rotation", "RanFor", "P1S1-P2S1", 19.65, 10.26, 85},
    {"Rotation", "RanFor", "P1S1-P2S2", 20.75, 17.31, 81},
    {"FLF", "kNNEuc", "P1S1-P1S2", 5.68, 4.23, 95},
    {"FLF", "kNNEuc", "P2S1-P2S2", 8.33, 3.33, 94.1},
    {"FLF", "kNNEuc", "P1S1-P2S1", 17.68, 12.31, 85},
    {"FLF", "kNNEuc", "P1S1-P2S2", 15.03, 14.62, 85.2},
    {"FLF", "LogReg", "P1S1-P1S2", 12.63, 3.21, 92},
    {"FLF", "LogReg", "P2S1-P2S2", 11.99, 1.28, 93.3},
    {"FLF", "LogReg", "P1S1-P2S1", 18.43, 6.03, 87.7},
    {"FLF", "LogReg", "P1S1-P2S2", 17.8, 5.38, 88.4},
    {"FLF", "MulPer", "P1S1-P1S2", 12.5, 2.82, 92.3},
    {"FLF", "MulPer", "P2S1-P2S2", 13.64, 0.77, 92.7},
    {"FLF", "MulPer", "P1S1-P2S1", 23.61, 5.13, 85.6},
    {"FLF", "MulPer", "P1S1-P2S2", 22.35, 3.72, 86.9},
    {"FLF", "RanFor", "P1S1-P1S2", 16.29, 1.03, 91.3},
    {"FLF", "RanFor", "P2S1-P2S2", 21.09, 0.9, 88.9},
    {"FLF", "RanFor", "P1S1-P2S1", 26.77, 2.31, 85.4},
    {"FLF", "RanFor", "P1S1-P2S2", 26.39, 2.31, 85.6},
}};

}  // namespace fixture
