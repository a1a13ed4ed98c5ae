#include "splitree/asymptotics.hpp"
#include "splitree/errors.hpp"
#include "splitree/exact_moments.hpp"
#include "splitree/high_prec_moments.hpp"

#include <doctest.h>

#include <string>

using namespace splitree;

namespace {

template <typename F>
ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no splitree::Error thrown");
    return ErrorCode::InvalidArgument;
}

// True when value truncated to the decimals of the printed string equals
// it: p <= v < p + ulp for positive p, p - ulp < v <= p for negative p.
bool matches_printed(const HighPrec& value, std::string_view printed) {
    auto point = printed.find('.');
    long decimals = point == std::string_view::npos ? 0 : static_cast<long>(printed.size() - point - 1);
    HighPrec p = parse_high_prec(printed);
    HighPrec ulp = pow(HighPrec{10}, -decimals);
    if (p >= 0) {
        return value >= p && value < p + ulp;
    }
    return value <= p && value > p - ulp;
}

// Independent 45-digit references (mpmath: nsum, psi, loggamma, stieltjes).
struct Reference {
    ConstantId id;
    const char* value;
};

const Reference REFERENCES[] = {
    {ConstantId::ConflictVarSlope, "3.38343449230400514199102951457055344556214776"},
    {ConstantId::HeightVarConst, "3.11669516433224530627417141131912852846670341"},
    {ConstantId::SizeMeanOffset, "1.1812500478045483526031382243001082001439546"},
    {ConstantId::DrawSizeOffset, "-0.5986036178188898266294462396207474807085802"},
    {ConstantId::CoinMeanOffset, "1.33274617727686715064641751940811553516243153"},
    {ConstantId::NaiveSortConst, "1.44637641134803993349426619791601589565910692"},
    {ConstantId::ResemblanceConst, "5.27937824108095837386562703778581538083641681"},
};

} // namespace

TEST_CASE("names and published values") {
    CHECK(ALL_CONSTANTS.size() == 16);
    for (ConstantId id : ALL_CONSTANTS) {
        auto parsed = parse_constant(constant_name(id));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == id);
    }
    CHECK_FALSE(parse_constant("PI").has_value());
    CHECK(published_value(ConstantId::DrawSizeOffset) == "-0.5986036178");
}

TEST_CASE("constants match their printed decimals") {
    for (ConstantId id : ALL_CONSTANTS) {
        CAPTURE(std::string{constant_name(id)});
        unsigned digits = std::min(20u, achievable_digits(id));
        HighPrec value = constant(id, digits);
        PrecisionScope scope{digits + GUARD_DIGITS};
        if (id == ConstantId::SortMeanLimit || id == ConstantId::SortAltMeanLimit) {
            CHECK(agreeing_digits(value, parse_high_prec(published_value(id))) >= 9);
        } else {
            CHECK(matches_printed(value, published_value(id)));
        }
    }
}

TEST_CASE("constants against independent references") {
    for (const auto& ref : REFERENCES) {
        CAPTURE(std::string{constant_name(ref.id)});
        HighPrec value = constant(ref.id, 40);
        PrecisionScope scope{50};
        CHECK(agreeing_digits(value, parse_high_prec(ref.value)) >= 39);
    }
    HighPrec slope = constant(ConstantId::ConflictMeanSlope, 40);
    HighPrec quarter = constant(ConstantId::ConflictVarQuarter, 40);
    HighPrec var_slope = constant(ConstantId::ConflictVarSlope, 40);
    PrecisionScope scope{50};
    CHECK(agreeing_digits(slope, 2 / log(HighPrec{2})) >= 39);
    CHECK(agreeing_digits(quarter * 4, var_slope) >= 39);
    CHECK(constant(ConstantId::HeightMeanOffset, 30) == HighPrec{1} / 2);
}

TEST_CASE("sorting limits agree with the extrapolated series") {
    // Both approach the reference from the same side; the printed value is a
    // truncation of 3.54551781324... and 3.67982610956...
    auto sort = sort_limit_series(ConstantId::SortMeanLimit, SORT_SERIES_TERMS);
    auto alt = sort_limit_series(ConstantId::SortAltMeanLimit, SORT_SERIES_TERMS);
    PrecisionScope scope{30};
    CHECK(matches_printed(sort.extrapolated, "3.5455178132"));
    CHECK(matches_printed(alt.extrapolated, "3.6798261095"));
}

TEST_CASE("sorting series at two truncation points") {
    for (ConstantId id : {ConstantId::SortMeanLimit, ConstantId::SortAltMeanLimit}) {
        CAPTURE(std::string{constant_name(id)});
        auto lo = sort_limit_series(id, SORT_SERIES_TERMS / 2);
        auto hi = sort_limit_series(id, SORT_SERIES_TERMS);
        PrecisionScope scope{30};
        HighPrec printed = parse_high_prec(published_value(id));
        CHECK(abs(hi.corrected - lo.corrected) < HighPrec{"1e-4"});
        // The plain partial sums stay below the limit, the tail-corrected
        // ones above it.
        for (const auto& s : {lo, hi}) {
            CHECK(s.partial <= printed);
            CHECK(s.corrected >= printed);
        }
        CHECK(hi.partial > lo.partial);
        CHECK(hi.corrected < lo.corrected);
    }
    CHECK(error_code_of([] { sort_limit_series(ConstantId::MaxVarSlope, 100); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { sort_limit_series(ConstantId::SortMeanLimit, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("decomposition identities for the sorting limits") {
    HighPrec sort = constant(ConstantId::SortMeanLimit, 10);
    HighPrec alt = constant(ConstantId::SortAltMeanLimit, 10);
    PrecisionScope scope{30};
    CHECK(abs((sort - HighPrec{8} / 3) - 2 * HighPrec{"0.4394255733"}) < HighPrec{"1e-9"});
    CHECK(abs((alt - HighPrec{13} / 6) - 2 * HighPrec{"0.7565797214"}) < HighPrec{"1e-9"});
}

TEST_CASE("naive sorting constant identity") {
    HighPrec naive = constant(ConstantId::NaiveSortConst, 30);
    PrecisionScope scope{40};
    HighPrec rhs = HighPrec{-3} / 4 + 1 / log(HighPrec{2}) + HighPrec{"0.7536813704"};
    CHECK(abs(naive - rhs) < HighPrec{"1e-10"});
}

TEST_CASE("draw size erratum") {
    PrecisionScope scope{30};
    HighPrec printed{"-0.5986036178"};
    CHECK(matches_printed(draw_size_offset_with(8), "-0.5986036178"));
    CHECK(abs(draw_size_offset_with(16) - printed) > HighPrec{"0.01"});
    CHECK(error_code_of([] { draw_size_offset_with(0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("inner series of the maximum-finding variance converges") {
    PrecisionScope scope{30};
    HighPrec s50 = max_var_inner_series(50);
    HighPrec s100 = max_var_inner_series(100);
    auto h = high_prec_moments(Variant::MaxFind, 50).h;
    HighPrec tail_bound = ldexp(h[50], -49);
    CHECK(abs(s100 - s50) < tail_bound);
    CHECK(s100 > s50);
}

TEST_CASE("precision limits") {
    CHECK(achievable_digits(ConstantId::SortMeanLimit) == 10);
    CHECK(achievable_digits(ConstantId::HeightVarConst) < STIELTJES_GAMMA1_DIGITS);
    CHECK(error_code_of([] { constant(ConstantId::SortMeanLimit, 11); }) == ErrorCode::PrecisionUnachievable);
    CHECK(error_code_of([] {
              constant(ConstantId::HeightVarConst, achievable_digits(ConstantId::HeightVarConst) + 1);
          }) == ErrorCode::PrecisionUnachievable);
    CHECK(error_code_of([] { constant(ConstantId::CoinVarConst, 0); }) == ErrorCode::InvalidArgument);
    CHECK(error_code_of([] { constant(ConstantId::CoinVarConst, MAX_PRECISION_DIGITS + 1); }) ==
          ErrorCode::InvalidArgument);
    HighPrec wide = constant(ConstantId::MaxVarSlope, 120);
    HighPrec narrow = constant(ConstantId::MaxVarSlope, 40);
    PrecisionScope scope{130};
    CHECK(agreeing_digits(wide, narrow) >= 40);
}

TEST_CASE("asymptotic predictions") {
    PrecisionScope scope{40};
    CHECK(asymptotic_prediction(Variant::ElectionHeight, 1024) == HighPrec{21} / 2);
    CHECK(agreeing_digits(asymptotic_prediction(Variant::Conflict, 1024),
                          HighPrec{"2954.63944374059705827312574669187509744977091"}) >= 38);
    HighPrec sort = asymptotic_prediction(Variant::Sort, 100);
    CHECK(agreeing_digits(sort, HighPrec{"354.55178132"}) >= 10);
    CHECK(agreeing_digits(asymptotic_prediction(Variant::DrawSize, 8),
                          6 + HighPrec{"-0.5986036178188898266294462396207474807085802"}) >= 38);
    CHECK(error_code_of([] { asymptotic_prediction(Variant::MaxFindRevised, 10); }) ==
          ErrorCode::UnsupportedVariant);
    CHECK(error_code_of([] { asymptotic_prediction(Variant::Conflict, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("residual profile agrees with the exact tables") {
    PrecisionScope scope{40};
    auto exact = moment_table(Variant::ElectionHeight, 256);
    auto profile = residual_profile(Variant::ElectionHeight, {64, 128, 256});
    REQUIRE(profile.points.size() == 3);
    for (const auto& point : profile.points) {
        HighPrec expected = to_high_prec(exact[point.n].mean()) - log2(HighPrec{point.n}) - HighPrec{1} / 2;
        CHECK(abs(point.residual - expected) < HighPrec{"1e-30"});
        CHECK(abs(point.mean - point.prediction - point.residual) < HighPrec{"1e-30"});
    }
    auto conflict = moment_table(Variant::Conflict, 128);
    auto c = residual_profile(Variant::Conflict, {128});
    HighPrec expected = to_high_prec(conflict[128].mean()) / 128 - 2 / log(HighPrec{2});
    CHECK(abs(c.points[0].residual - expected) < HighPrec{"1e-30"});
}

TEST_CASE("residuals decay like 1/n") {
    PrecisionScope scope{30};
    std::vector<unsigned> powers{64, 128, 256, 512, 1024, 2048, 4096};
    auto height = residual_profile(Variant::ElectionHeight, powers);
    auto conflict = residual_profile(Variant::Conflict, powers);
    for (std::size_t i = 0; i < powers.size(); ++i) {
        HighPrec n{powers[i]};
        CAPTURE(powers[i]);
        CHECK(height.points[i].residual > 0);
        CHECK(height.points[i].residual < 1 / n);
        CHECK(abs(conflict.points[i].residual) < HighPrec{"1.05"} / n);
        if (i > 0) {
            CHECK(height.points[i].residual < height.points[i - 1].residual);
        }
    }
    CHECK(error_code_of([] { residual_profile(Variant::Conflict, {HIGH_PREC_LIMIT + 1}); }) ==
          ErrorCode::ExactLimitExceeded);
    CHECK(error_code_of([] { residual_profile(Variant::MaxFindRevised, {8}); }) ==
          ErrorCode::UnsupportedVariant);
}
