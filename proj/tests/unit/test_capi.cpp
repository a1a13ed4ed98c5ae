#include <splitree/splitree.h>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

struct Context {
    Context() { REQUIRE(splitree_context_create(&handle) == SPLITREE_OK); }
    ~Context() { splitree_context_destroy(handle); }
    splitree_context* handle{nullptr};
};

std::string take(char* text) {
    std::string result{text};
    splitree_string_free(text);
    return result;
}

std::string column(const splitree_table* table, size_t row, const std::string& name) {
    for (size_t c = 0; c < splitree_table_columns(table); ++c) {
        if (name == splitree_table_column_name(table, c)) {
            return splitree_table_cell(table, row, c);
        }
    }
    FAIL("missing column " << name);
    return {};
}

} // namespace

TEST_CASE("version and names") {
    CHECK(std::string{splitree_version()} == "1.0.0");
    CHECK(std::string{splitree_status_name(SPLITREE_OK)} == "ok");
    CHECK(std::string{splitree_status_name(SPLITREE_EXACT_LIMIT_EXCEEDED)} == "exact limit exceeded");
    splitree_variant v;
    REQUIRE(splitree_variant_parse("draw-size", &v) == SPLITREE_OK);
    CHECK(v == SPLITREE_DRAW_SIZE);
    CHECK(std::string{splitree_variant_name(SPLITREE_MAX_FIND_REVISED)} == "maxrev");
    CHECK(splitree_variant_parse("heapsort", &v) == SPLITREE_INVALID_ARGUMENT);
    CHECK(std::string{splitree_last_error()}.find("heapsort") != std::string::npos);
}

TEST_CASE("context settings") {
    Context ctx;
    CHECK(splitree_context_precision(ctx.handle) == 50);
    CHECK(splitree_context_set_precision(ctx.handle, 20) == SPLITREE_OK);
    CHECK(splitree_context_precision(ctx.handle) == 20);
    CHECK(splitree_context_set_precision(ctx.handle, 0) == SPLITREE_INVALID_ARGUMENT);
    CHECK(splitree_context_set_precision(ctx.handle, 1001) == SPLITREE_INVALID_ARGUMENT);
    CHECK(splitree_context_set_threads(ctx.handle, 2) == SPLITREE_OK);
    CHECK(splitree_context_set_precision(nullptr, 20) == SPLITREE_INVALID_ARGUMENT);
    CHECK(splitree_context_create(nullptr) == SPLITREE_INVALID_ARGUMENT);
}

TEST_CASE("moment tables") {
    Context ctx;
    splitree_table* table = nullptr;
    REQUIRE(splitree_moment_table(ctx.handle, SPLITREE_CONFLICT, 3, &table) == SPLITREE_OK);
    CHECK(splitree_table_rows(table) == 4);
    CHECK(splitree_table_columns(table) == 4);
    CHECK(column(table, 3, "n") == "3");
    CHECK(column(table, 3, "g") == "23/3");
    CHECK(column(table, 3, "h") == "548/9");
    CHECK(column(table, 3, "var") == "88/9");
    CHECK(splitree_table_cell(table, 9, 0) == nullptr);
    CHECK(splitree_table_column_name(table, 4) == nullptr);
    splitree_table_destroy(table);

    REQUIRE(splitree_moment_table(ctx.handle, SPLITREE_SORT, 3, &table) == SPLITREE_OK);
    CHECK(column(table, 3, "xi") == "8");
    CHECK(column(table, 3, "eta") == "190/3");
    splitree_table_destroy(table);

    table = nullptr;
    CHECK(splitree_moment_table(ctx.handle, SPLITREE_MAX_FIND_REVISED, 3, &table) == SPLITREE_UNSUPPORTED_VARIANT);
    CHECK(std::string{splitree_last_error()} == "no exact recurrence; use simulate");
    CHECK(table == nullptr);

    REQUIRE(splitree_context_set_exact_limit(ctx.handle, 10) == SPLITREE_OK);
    CHECK(splitree_moment_table(ctx.handle, SPLITREE_CONFLICT, 11, &table) == SPLITREE_EXACT_LIMIT_EXCEEDED);
    CHECK(splitree_moment_table(ctx.handle, static_cast<splitree_variant>(42), 3, &table) ==
          SPLITREE_INVALID_ARGUMENT);
}

TEST_CASE("pgf and series") {
    Context ctx;
    char* out = nullptr;
    REQUIRE(splitree_pgf_eval(ctx.handle, SPLITREE_CONFLICT, 2, "1/2", &out) == SPLITREE_OK);
    CHECK(take(out) == "1/14");
    REQUIRE(splitree_pgf_eval(ctx.handle, SPLITREE_ELECTION_HEIGHT, 2, "0.5", &out) == SPLITREE_OK);
    CHECK(take(out) == "1/3");
    CHECK(splitree_pgf_eval(ctx.handle, SPLITREE_CONFLICT, 2, "3/2", &out) == SPLITREE_DOMAIN_ERROR);
    CHECK(splitree_pgf_eval(ctx.handle, SPLITREE_CONFLICT, 2, "half", &out) == SPLITREE_INVALID_ARGUMENT);

    REQUIRE(splitree_context_set_precision(ctx.handle, 25) == SPLITREE_OK);
    REQUIRE(splitree_conflict_mean_series(ctx.handle, 3, "1e-20", &out) == SPLITREE_OK);
    CHECK(take(out).rfind("7.66666666666666666666", 0) == 0);
}

TEST_CASE("scripted trial with trace") {
    Context ctx;
    std::vector<uint8_t> bits{0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1};
    std::vector<size_t> lengths{5, 2, 2, 3, 3, 2};
    uint64_t statistic = 0;
    splitree_table* trace = nullptr;
    REQUIRE(splitree_run_scripted_trial(ctx.handle, SPLITREE_CONFLICT, 5, bits.data(), lengths.data(),
                                        lengths.size(), &statistic, &trace) == SPLITREE_OK);
    CHECK(statistic == 13);
    REQUIRE(trace != nullptr);
    CHECK(splitree_table_rows(trace) == 13);
    CHECK(column(trace, 0, "parent") == "");
    CHECK(column(trace, 0, "items") == "1 2 3 4 5");
    CHECK(column(trace, 1, "items") == "1 3");
    CHECK(column(trace, 1, "parent") == "0");
    splitree_table_destroy(trace);

    std::vector<size_t> bad_lengths{5, 3};
    CHECK(splitree_run_scripted_trial(ctx.handle, SPLITREE_CONFLICT, 5, bits.data(), bad_lengths.data(), 2,
                                      &statistic, nullptr) == SPLITREE_SCRIPT_LENGTH_MISMATCH);
    CHECK(splitree_run_scripted_trial(ctx.handle, SPLITREE_CONFLICT, 5, bits.data(), lengths.data(), 1,
                                      &statistic, nullptr) == SPLITREE_SCRIPT_EXHAUSTED);
}

TEST_CASE("seeded trials, depth cap and traces") {
    Context ctx;
    uint64_t a = 0;
    uint64_t b = 0;
    REQUIRE(splitree_run_seeded_trial(ctx.handle, SPLITREE_SORT, 9, 4, 2, &a, nullptr) == SPLITREE_OK);
    REQUIRE(splitree_run_seeded_trial(ctx.handle, SPLITREE_SORT, 9, 4, 2, &b, nullptr) == SPLITREE_OK);
    CHECK(a == b);
    splitree_table* trace = nullptr;
    CHECK(splitree_run_seeded_trial(ctx.handle, SPLITREE_SORT, 9, 4, 2, &a, &trace) ==
          SPLITREE_UNSUPPORTED_VARIANT);
    REQUIRE(splitree_context_set_depth_cap(ctx.handle, 1) == SPLITREE_OK);
    std::vector<uint8_t> bits{0, 0, 0, 0};
    std::vector<size_t> lengths{2, 2};
    CHECK(splitree_run_scripted_trial(ctx.handle, SPLITREE_CONFLICT, 2, bits.data(), lengths.data(), 2, &a,
                                      nullptr) == SPLITREE_DEPTH_CAP_EXCEEDED);
    CHECK(splitree_run_seeded_trial(ctx.handle, SPLITREE_CONFLICT, 2, 1, 0, nullptr, nullptr) ==
          SPLITREE_INVALID_ARGUMENT);
}

TEST_CASE("estimates") {
    Context ctx;
    REQUIRE(splitree_context_set_precision(ctx.handle, 20) == SPLITREE_OK);
    splitree_table* table = nullptr;
    REQUIRE(splitree_estimate(ctx.handle, SPLITREE_CONFLICT, 3, 100'000, 5, &table) == SPLITREE_OK);
    CHECK(splitree_table_rows(table) == 1);
    CHECK(column(table, 0, "variant") == "conflict");
    CHECK(column(table, 0, "trials") == "100000");
    CHECK(column(table, 0, "hypothesis") == "false");
    double mean = std::strtod(column(table, 0, "mean").c_str(), nullptr);
    double se = std::strtod(column(table, 0, "std_error").c_str(), nullptr);
    CHECK(std::abs(mean - 23.0 / 3.0) <= 5 * se);
    splitree_table_destroy(table);

    REQUIRE(splitree_estimate_joint_election(ctx.handle, 5, 50'000, 3, &table) == SPLITREE_OK);
    CHECK(std::strtod(column(table, 0, "covariance").c_str(), nullptr) > 0);
    CHECK(std::strtod(column(table, 0, "covariance_std_error").c_str(), nullptr) > 0);
    splitree_table_destroy(table);

    CHECK(splitree_estimate(ctx.handle, SPLITREE_CONFLICT, 3, 1, 5, &table) == SPLITREE_INVALID_ARGUMENT);
}

TEST_CASE("constants") {
    Context ctx;
    REQUIRE(splitree_constant_count() == 16);
    CHECK(splitree_constant_name(16) == nullptr);
    bool found = false;
    for (size_t i = 0; i < splitree_constant_count(); ++i) {
        if (std::string{splitree_constant_name(i)} == "DRAW_SIZE_OFFSET") {
            found = true;
            CHECK(std::string{splitree_constant_published(i)} == "-0.5986036178");
            CHECK(splitree_constant_achievable_digits(i) == 1000);
        }
    }
    CHECK(found);
    char* out = nullptr;
    REQUIRE(splitree_constant(ctx.handle, "DRAW_SIZE_OFFSET", 12, &out) == SPLITREE_OK);
    CHECK(take(out) == "-0.598603617819");
    REQUIRE(splitree_context_set_precision(ctx.handle, 8) == SPLITREE_OK);
    REQUIRE(splitree_constant(ctx.handle, "CONFLICT_MEAN_SLOPE", 0, &out) == SPLITREE_OK);
    CHECK(take(out) == "2.8853901");
    CHECK(splitree_constant(ctx.handle, "SORT_MEAN_LIMIT", 30, &out) == SPLITREE_PRECISION_UNACHIEVABLE);
    CHECK(splitree_constant(ctx.handle, "TAU", 5, &out) == SPLITREE_INVALID_ARGUMENT);
    REQUIRE(splitree_draw_size_offset_with(ctx.handle, 16, &out) == SPLITREE_OK);
    CHECK(take(out).rfind("0.2913232", 0) == 0);
}

TEST_CASE("predictions and residuals") {
    Context ctx;
    REQUIRE(splitree_context_set_precision(ctx.handle, 12) == SPLITREE_OK);
    char* out = nullptr;
    REQUIRE(splitree_asymptotic_prediction(ctx.handle, SPLITREE_ELECTION_HEIGHT, 1024, &out) == SPLITREE_OK);
    CHECK(take(out) == "10.5000000000");
    CHECK(splitree_asymptotic_prediction(ctx.handle, SPLITREE_MAX_FIND_REVISED, 8, &out) ==
          SPLITREE_UNSUPPORTED_VARIANT);
    unsigned n_list[] = {64, 128};
    splitree_table* table = nullptr;
    REQUIRE(splitree_residual_profile(ctx.handle, SPLITREE_ELECTION_HEIGHT, n_list, 2, &table) == SPLITREE_OK);
    CHECK(splitree_table_rows(table) == 2);
    CHECK(column(table, 0, "residual").rfind("0.0112188690", 0) == 0);
    splitree_table_destroy(table);
    unsigned too_big[] = {100'000};
    CHECK(splitree_residual_profile(ctx.handle, SPLITREE_CONFLICT, too_big, 1, &table) ==
          SPLITREE_EXACT_LIMIT_EXCEEDED);
}

TEST_CASE("throughput") {
    Context ctx;
    REQUIRE(splitree_context_set_precision(ctx.handle, 12) == SPLITREE_OK);
    char* root = nullptr;
    splitree_table* brackets = nullptr;
    REQUIRE(splitree_lambda_critical(ctx.handle, 3, "1e-15", 0, &root, &brackets) == SPLITREE_OK);
    CHECK(take(root) == "0.401599370184");
    CHECK(splitree_table_rows(brackets) == 1);
    CHECK(column(brackets, 0, "selected") == "true");
    splitree_table_destroy(brackets);
    char* out = nullptr;
    REQUIRE(splitree_blocked_lambda(ctx.handle, 2, &out) == SPLITREE_OK);
    CHECK(take(out) == "0.346573590280");
    REQUIRE(splitree_equation_residual(ctx.handle, 2, "0.3601770279", "1e-20", 0, &out) == SPLITREE_OK);
    CHECK(std::abs(std::strtod(take(out).c_str(), nullptr)) < 1e-8);
    CHECK(splitree_equation_residual(ctx.handle, 2, "1.5", "1e-20", 0, &out) == SPLITREE_DOMAIN_ERROR);
    CHECK(splitree_lambda_critical(ctx.handle, 1, "1e-10", 0, &root, nullptr) == SPLITREE_INVALID_ARGUMENT);
}

TEST_CASE("validation report") {
    Context ctx;
    REQUIRE(splitree_context_set_precision(ctx.handle, 15) == SPLITREE_OK);
    splitree_table* report = nullptr;
    size_t failures = 99;
    REQUIRE(splitree_validate(ctx.handle, 3, 20'000, 11, &report, &failures) == SPLITREE_OK);
    CHECK(failures == 0);
    CHECK(splitree_table_columns(report) == 8);
    for (size_t r = 0; r < splitree_table_rows(report); ++r) {
        CHECK(column(report, r, "passed") == "true");
    }
    splitree_table_destroy(report);
}
