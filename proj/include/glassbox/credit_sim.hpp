#pragma once

#include <cstdint>

#include "glassbox/frame.hpp"

namespace glassbox {

// Seeded generator of a synthetic credit-card portfolio with the column
// layout of the classic Taiwan default-of-credit-card-clients table:
// LIMIT_BAL, SEX (1 male / 2 female), EDUCATION, MARRIAGE, AGE, repayment
// statuses PAY_0 and PAY_2..PAY_6 (-2..8, higher = further behind), bill
// statements BILL_AMT1..6, payments PAY_AMT1..6, and the binary target
// `default.payment.next.month`.
//
// The joint distribution is built around a latent credit quality: riskier
// accounts run higher repayment stress, carry higher utilization, and pay
// smaller shares of their bills. Repayment status is by far the strongest
// predictor of default. Women are generated with slightly higher observed
// repayment stress yet a lower default rate conditional on the observed
// columns, so a model trained without SEX still shows group disparities in
// an audit: a mildly depressed favorable rate and a clearly lower false
// omission rate for the female group.
Frame generate_credit_portfolio(std::size_t n_rows, std::uint64_t seed);

// Schema for loading CSV files produced from this generator (or the real
// table): target plus the nominal demographic columns.
Schema credit_schema();

}  // namespace glassbox
