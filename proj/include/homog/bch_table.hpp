#ifndef HOMOG_BCH_TABLE_HPP
#define HOMOG_BCH_TABLE_HPP

// Generated by tools/gen_bch_table.py -- do not edit by hand.
//
// Truncated Baker-Campbell-Hausdorff series log(exp X exp Y) through
// degree 6, written as
//
//   Z = sum_w (num/den) [w_1, [w_2, ..., [w_{n-1}, w_n]]]
//
// over words w in {x, y}. Words whose last two letters coincide give a
// vanishing bracket and are omitted.

namespace homog::detail
{

struct BchWord
{
  const char * word;
  long num;
  long den;
};

inline constexpr BchWord kBchWords[] = {
    {"x", 1, 1},
    {"y", 1, 1},
    {"xy", 1, 4},
    {"yx", -1, 4},
    {"xxy", 1, 36},
    {"xyx", -1, 18},
    {"yxy", -1, 18},
    {"yyx", 1, 36},
    {"xyxy", -1, 48},
    {"yxyx", 1, 48},
    {"xxxxy", -1, 3600},
    {"xxxyx", 1, 900},
    {"xxyxy", -1, 600},
    {"xxyyx", -1, 600},
    {"xyxxy", -1, 600},
    {"xyxyx", 1, 150},
    {"xyyxy", -1, 600},
    {"xyyyx", 1, 900},
    {"yxxxy", 1, 900},
    {"yxxyx", -1, 600},
    {"yxyxy", 1, 150},
    {"yxyyx", -1, 600},
    {"yyxxy", -1, 600},
    {"yyxyx", -1, 600},
    {"yyyxy", 1, 900},
    {"yyyyx", -1, 3600},
    {"xxxyxy", 1, 2160},
    {"xxyxxy", -1, 1440},
    {"xxyyxy", -1, 1440},
    {"xyxxxy", 1, 2160},
    {"xyxyxy", 1, 360},
    {"xyyxxy", -1, 1440},
    {"xyyyxy", 1, 2160},
    {"yxxxyx", -1, 2160},
    {"yxxyyx", 1, 1440},
    {"yxyxyx", -1, 360},
    {"yxyyyx", -1, 2160},
    {"yyxxyx", 1, 1440},
    {"yyxyyx", 1, 1440},
    {"yyyxyx", -1, 2160},
};

inline constexpr int kBchMaxDegree = 6;

} // namespace homog::detail

#endif
