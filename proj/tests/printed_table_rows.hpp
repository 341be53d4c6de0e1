#pragma once

#include <array>

// rows of the printed p = 5 table: ell, t, |T|, |M|, M'
struct PrintedRow {
    int ell, t;
    long T, M, Mp;
};

inline constexpr std::array<PrintedRow, 59> kPrintedTable{{
    {0, 1, 6, 26, 10},         {1, 1, 26, 46, 30},        {2, 1, 46, 66, 50},        {0, 2, 26, 126, 46},
    {5, 1, 106, 126, 110},     {6, 1, 126, 146, 130},     {7, 1, 146, 166, 150},     {1, 2, 126, 226, 146},
    {10, 1, 206, 226, 210},    {11, 1, 226, 246, 230},    {12, 1, 246, 266, 250},    {2, 2, 226, 326, 246},
    {15, 1, 306, 326, 310},    {16, 1, 326, 346, 330},    {17, 1, 346, 366, 350},    {3, 2, 326, 426, 346},
    {20, 1, 406, 426, 410},    {21, 1, 426, 446, 430},    {22, 1, 446, 466, 450},    {4, 2, 426, 526, 446},
    {25, 1, 506, 526, 510},    {26, 1, 526, 546, 530},    {27, 1, 546, 566, 550},    {0, 3, 126, 626, 214},
    {5, 2, 526, 626, 546},     {30, 1, 606, 626, 610},    {31, 1, 626, 646, 630},    {32, 1, 646, 666, 650},
    {6, 2, 626, 726, 646},     {35, 1, 706, 726, 710},    {36, 1, 726, 746, 730},    {37, 1, 746, 766, 750},
    {7, 2, 726, 826, 746},     {40, 1, 806, 826, 810},    {41, 1, 826, 846, 830},    {42, 1, 846, 866, 850},
    {8, 2, 826, 926, 846},     {45, 1, 906, 926, 910},    {46, 1, 926, 946, 930},    {47, 1, 946, 966, 950},
    {9, 2, 926, 1026, 946},    {50, 1, 1006, 1026, 1010}, {51, 1, 1026, 1046, 1030}, {52, 1, 1046, 1066, 1050},
    {1, 3, 626, 1126, 714},    {10, 2, 1026, 1126, 1046}, {55, 1, 1106, 1126, 1110}, {56, 1, 1126, 1146, 1130},
    {57, 1, 1146, 1166, 1150}, {11, 2, 1126, 1226, 1146}, {60, 1, 1206, 1226, 1210}, {61, 1, 1226, 1246, 1230},
    {62, 1, 1246, 1266, 1250}, {154, 1, 3086, 3106, 3090}, {0, 4, 626, 3126, 1050},  {5, 3, 2626, 3126, 2714},
    {30, 2, 3026, 3126, 3046}, {155, 1, 3106, 3126, 3110}, {156, 1, 3126, 3146, 3130},
}};
