// Copyright 2026 The PaPIS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace papis {

using Rgb8 = std::array<std::uint8_t, 3>;

// 256-entry diverging cold-to-warm lookup table (blue = low, red = high),
// sampled once from the "coolwarm" map and frozen here so renders are
// byte-identical on every platform.
inline constexpr std::array<Rgb8, 256> kWarmColdLut = {{
    {59, 76, 192}, {60, 78, 194}, {61, 80, 195}, {62, 81, 197},
    {63, 83, 198}, {64, 85, 200}, {66, 87, 201}, {67, 88, 203},
    {68, 90, 204}, {69, 92, 206}, {70, 94, 207}, {72, 95, 209},
    {73, 97, 210}, {74, 99, 211}, {75, 100, 213}, {76, 102, 214},
    {78, 104, 216}, {79, 105, 217}, {80, 107, 218}, {81, 109, 219},
    {83, 110, 221}, {84, 112, 222}, {85, 114, 223}, {86, 115, 224},
    {88, 117, 225}, {89, 119, 227}, {90, 120, 228}, {91, 122, 229},
    {93, 124, 230}, {94, 125, 231}, {95, 127, 232}, {97, 128, 233},
    {98, 130, 234}, {99, 132, 235}, {100, 133, 236}, {102, 135, 237},
    {103, 136, 238}, {104, 138, 239}, {106, 139, 239}, {107, 141, 240},
    {108, 143, 241}, {110, 144, 242}, {111, 146, 243}, {112, 147, 243},
    {114, 149, 244}, {115, 150, 245}, {117, 151, 246}, {118, 153, 246},
    {119, 154, 247}, {121, 156, 248}, {122, 157, 248}, {123, 159, 249},
    {125, 160, 249}, {126, 161, 250}, {128, 163, 250}, {129, 164, 251},
    {130, 166, 251}, {132, 167, 252}, {133, 168, 252}, {134, 169, 252},
    {136, 171, 253}, {137, 172, 253}, {139, 173, 253}, {140, 175, 254},
    {141, 176, 254}, {143, 177, 254}, {144, 178, 254}, {146, 180, 254},
    {147, 181, 254}, {148, 182, 255}, {150, 183, 255}, {151, 184, 255},
    {152, 185, 255}, {154, 187, 255}, {155, 188, 255}, {157, 189, 255},
    {158, 190, 255}, {159, 191, 255}, {161, 192, 255}, {162, 193, 255},
    {163, 194, 254}, {165, 195, 254}, {166, 196, 254}, {167, 197, 254},
    {169, 198, 253}, {170, 199, 253}, {171, 200, 253}, {173, 201, 253},
    {174, 201, 252}, {175, 202, 252}, {177, 203, 252}, {178, 204, 251},
    {179, 205, 251}, {181, 205, 250}, {182, 206, 250}, {183, 207, 249},
    {185, 208, 249}, {186, 208, 248}, {187, 209, 248}, {188, 210, 247},
    {190, 210, 246}, {191, 211, 246}, {192, 212, 245}, {193, 212, 244},
    {195, 213, 244}, {196, 213, 243}, {197, 214, 242}, {198, 214, 241},
    {199, 215, 240}, {201, 215, 240}, {202, 216, 239}, {203, 216, 238},
    {204, 217, 237}, {205, 217, 236}, {206, 218, 235}, {207, 218, 234},
    {209, 218, 233}, {210, 219, 232}, {211, 219, 231}, {212, 219, 230},
    {213, 219, 229}, {214, 220, 228}, {215, 220, 227}, {216, 220, 226},
    {217, 220, 225}, {218, 220, 224}, {219, 220, 222}, {220, 221, 221},
    {221, 220, 220}, {222, 220, 219}, {223, 219, 217}, {224, 219, 216},
    {225, 218, 214}, {226, 218, 213}, {227, 217, 211}, {228, 217, 210},
    {229, 216, 209}, {230, 215, 207}, {231, 215, 206}, {232, 214, 204},
    {233, 213, 203}, {234, 213, 201}, {234, 212, 200}, {235, 211, 198},
    {236, 211, 197}, {237, 210, 195}, {237, 209, 194}, {238, 208, 192},
    {239, 207, 191}, {239, 206, 189}, {240, 205, 187}, {241, 205, 186},
    {241, 204, 184}, {242, 203, 183}, {242, 202, 181}, {242, 201, 180},
    {243, 200, 178}, {243, 199, 177}, {244, 198, 175}, {244, 197, 173},
    {245, 196, 172}, {245, 194, 170}, {245, 193, 169}, {245, 192, 167},
    {246, 191, 166}, {246, 190, 164}, {246, 189, 162}, {247, 188, 161},
    {247, 186, 159}, {247, 185, 158}, {247, 184, 156}, {247, 183, 155},
    {247, 181, 153}, {247, 180, 151}, {247, 179, 150}, {247, 177, 148},
    {247, 176, 147}, {247, 175, 145}, {247, 173, 144}, {247, 172, 142},
    {247, 170, 140}, {247, 169, 139}, {247, 168, 137}, {247, 166, 136},
    {246, 165, 134}, {246, 163, 133}, {246, 162, 131}, {245, 160, 129},
    {245, 159, 128}, {245, 157, 126}, {245, 156, 125}, {244, 154, 123},
    {244, 152, 122}, {243, 151, 120}, {243, 149, 119}, {243, 148, 117},
    {242, 146, 116}, {242, 144, 114}, {241, 143, 113}, {241, 141, 111},
    {240, 139, 110}, {240, 138, 108}, {239, 136, 107}, {238, 134, 105},
    {238, 132, 104}, {237, 131, 102}, {236, 129, 101}, {236, 127, 99},
    {235, 125, 98}, {234, 123, 96}, {233, 122, 95}, {233, 120, 93},
    {232, 118, 92}, {231, 116, 91}, {230, 114, 89}, {229, 112, 88},
    {228, 110, 86}, {227, 108, 85}, {227, 107, 84}, {226, 105, 82},
    {225, 103, 81}, {224, 101, 79}, {223, 99, 78}, {222, 97, 77},
    {221, 95, 75}, {220, 93, 74}, {218, 90, 73}, {217, 88, 71},
    {216, 86, 70}, {215, 84, 69}, {214, 82, 68}, {213, 80, 66},
    {212, 78, 65}, {210, 75, 64}, {209, 73, 63}, {208, 71, 61},
    {207, 69, 60}, {205, 66, 59}, {204, 64, 58}, {203, 62, 56},
    {202, 59, 55}, {200, 56, 54}, {199, 54, 53}, {197, 51, 52},
    {196, 48, 50}, {195, 46, 49}, {193, 43, 48}, {192, 40, 47},
    {190, 36, 46}, {189, 31, 45}, {187, 27, 44}, {186, 22, 43},
    {184, 18, 42}, {183, 13, 40}, {181, 9, 39}, {180, 4, 38},
}};

inline constexpr Rgb8 kNanColor = {128, 128, 128};

}  // namespace papis
