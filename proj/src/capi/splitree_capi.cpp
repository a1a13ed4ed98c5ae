#include "splitree/splitree.h"

#include "splitree/asymptotics.hpp"
#include "splitree/errors.hpp"
#include "splitree/exact_moments.hpp"
#include "splitree/simulator.hpp"
#include "splitree/throughput.hpp"
#include "splitree/validation.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

struct splitree_context {
    unsigned precision{splitree::DEFAULT_PRECISION_DIGITS};
    unsigned exact_limit{splitree::DEFAULT_EXACT_LIMIT};
    splitree::SimulatorOptions options;
};

struct splitree_table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

namespace {

using namespace splitree;

thread_local std::string t_LastError;

splitree_status to_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return SPLITREE_INVALID_ARGUMENT;
    case ErrorCode::UnsupportedVariant:
        return SPLITREE_UNSUPPORTED_VARIANT;
    case ErrorCode::ExactLimitExceeded:
        return SPLITREE_EXACT_LIMIT_EXCEEDED;
    case ErrorCode::DomainError:
        return SPLITREE_DOMAIN_ERROR;
    case ErrorCode::ScriptExhausted:
        return SPLITREE_SCRIPT_EXHAUSTED;
    case ErrorCode::ScriptLengthMismatch:
        return SPLITREE_SCRIPT_LENGTH_MISMATCH;
    case ErrorCode::DepthCapExceeded:
        return SPLITREE_DEPTH_CAP_EXCEEDED;
    case ErrorCode::PrecisionUnachievable:
        return SPLITREE_PRECISION_UNACHIEVABLE;
    case ErrorCode::NoRootFound:
        return SPLITREE_NO_ROOT_FOUND;
    case ErrorCode::NonConvergence:
        return SPLITREE_NON_CONVERGENCE;
    }
    return SPLITREE_INTERNAL_ERROR;
}

template<typename BODY>
splitree_status guarded(BODY body) {
    try {
        body();
        t_LastError.clear();
        return SPLITREE_OK;
    } catch (const Error& error) {
        t_LastError = error.what();
        return to_status(error.code());
    } catch (const std::bad_alloc&) {
        t_LastError = "out of memory";
    } catch (const std::exception& error) {
        t_LastError = error.what();
    } catch (...) {
        t_LastError = "unknown failure";
    }
    return SPLITREE_INTERNAL_ERROR;
}

void require(bool condition, const char* message) {
    if (!condition) {
        throw Error{ErrorCode::InvalidArgument, message};
    }
}

Variant to_variant(splitree_variant variant) {
    auto index = static_cast<int>(variant);
    require(index >= 0 && index < static_cast<int>(ALL_VARIANTS.size()), "unknown variant");
    return ALL_VARIANTS[static_cast<std::size_t>(index)];
}

char* duplicate(const std::string& text) {
    auto* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (copy == nullptr) {
        throw std::bad_alloc{};
    }
    std::memcpy(copy, text.c_str(), text.size() + 1);
    return copy;
}

std::string format(const splitree_context* context, const HighPrec& value) {
    return to_string(value, context->precision);
}

std::string join_items(const std::vector<int>& items) {
    std::string text;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            text += ' ';
        }
        text += std::to_string(items[i]);
    }
    return text;
}

splitree_table* trace_table(const TreeTrace& trace) {
    auto* table = new splitree_table{{"id", "parent", "items", "label"}, {}};
    for (const auto& node : trace.nodes) {
        table->rows.push_back({std::to_string(node.id), node.parent ? std::to_string(*node.parent) : "",
                               join_items(node.items), std::to_string(node.label)});
    }
    return table;
}

//! Runs one trial and hands out its statistic and optional trace.
void deliver_trial(Variant variant,
                   unsigned n,
                   CoinSource& source,
                   const splitree_context* context,
                   uint64_t* statistic,
                   splitree_table** trace) {
    require(statistic != nullptr, "statistic must not be null");
    auto outcome = run_trial(variant, n, source, trace != nullptr, context->options);
    *statistic = outcome.statistic;
    if (trace != nullptr) {
        if (!outcome.trace) {
            throw Error{ErrorCode::UnsupportedVariant, "no trace is recorded for the sort variant"};
        }
        *trace = trace_table(*outcome.trace);
    }
}

} // unnamed::

extern "C" {

const char* splitree_version(void) {
    return SPLITREE_VERSION_STRING;
}

const char* splitree_status_name(splitree_status status) {
    switch (status) {
    case SPLITREE_OK:
        return "ok";
    case SPLITREE_INVALID_ARGUMENT:
        return "invalid argument";
    case SPLITREE_UNSUPPORTED_VARIANT:
        return "unsupported variant";
    case SPLITREE_EXACT_LIMIT_EXCEEDED:
        return "exact limit exceeded";
    case SPLITREE_DOMAIN_ERROR:
        return "domain error";
    case SPLITREE_SCRIPT_EXHAUSTED:
        return "script exhausted";
    case SPLITREE_SCRIPT_LENGTH_MISMATCH:
        return "script length mismatch";
    case SPLITREE_DEPTH_CAP_EXCEEDED:
        return "depth cap exceeded";
    case SPLITREE_PRECISION_UNACHIEVABLE:
        return "precision unachievable";
    case SPLITREE_NO_ROOT_FOUND:
        return "no root found";
    case SPLITREE_NON_CONVERGENCE:
        return "non-convergence";
    case SPLITREE_INTERNAL_ERROR:
        return "internal error";
    }
    return "unknown status";
}

const char* splitree_last_error(void) {
    return t_LastError.c_str();
}

void splitree_string_free(char* text) {
    std::free(text);
}

splitree_status splitree_variant_parse(const char* name, splitree_variant* out) {
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        auto variant = parse_variant(name);
        if (!variant) {
            throw Error{ErrorCode::InvalidArgument, std::string{"unknown variant '"} + name + "'"};
        }
        *out = static_cast<splitree_variant>(*variant);
    });
}

const char* splitree_variant_name(splitree_variant variant) {
    auto index = static_cast<int>(variant);
    if (index < 0 || index >= static_cast<int>(ALL_VARIANTS.size())) {
        return nullptr;
    }
    return cli_name(ALL_VARIANTS[static_cast<std::size_t>(index)]).data();
}

splitree_status splitree_context_create(splitree_context** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new splitree_context{};
    });
}

void splitree_context_destroy(splitree_context* context) {
    delete context;
}

splitree_status splitree_context_set_precision(splitree_context* context, unsigned digits) {
    return guarded([&] {
        require(context != nullptr, "null context");
        require(digits >= 1 && digits <= MAX_PRECISION_DIGITS, "precision must be between 1 and 1000 digits");
        context->precision = digits;
    });
}

unsigned splitree_context_precision(const splitree_context* context) {
    return context == nullptr ? 0 : context->precision;
}

splitree_status splitree_context_set_exact_limit(splitree_context* context, unsigned limit) {
    return guarded([&] {
        require(context != nullptr, "null context");
        context->exact_limit = limit;
    });
}

splitree_status splitree_context_set_threads(splitree_context* context, unsigned threads) {
    return guarded([&] {
        require(context != nullptr, "null context");
        context->options.threads = threads;
    });
}

splitree_status splitree_context_set_depth_cap(splitree_context* context, uint64_t depth) {
    return guarded([&] {
        require(context != nullptr, "null context");
        require(depth >= 1, "depth cap must be positive");
        context->options.depth_cap = static_cast<std::size_t>(depth);
    });
}

size_t splitree_table_rows(const splitree_table* table) {
    return table == nullptr ? 0 : table->rows.size();
}

size_t splitree_table_columns(const splitree_table* table) {
    return table == nullptr ? 0 : table->columns.size();
}

const char* splitree_table_column_name(const splitree_table* table, size_t column) {
    if (table == nullptr || column >= table->columns.size()) {
        return nullptr;
    }
    return table->columns[column].c_str();
}

const char* splitree_table_cell(const splitree_table* table, size_t row, size_t column) {
    if (table == nullptr || row >= table->rows.size() || column >= table->columns.size()) {
        return nullptr;
    }
    return table->rows[row][column].c_str();
}

void splitree_table_destroy(splitree_table* table) {
    delete table;
}

splitree_status splitree_moment_table(splitree_context* context,
                                      splitree_variant variant,
                                      unsigned n_max,
                                      splitree_table** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        Variant v = to_variant(variant);
        auto records = moment_table(v, n_max, context->exact_limit);
        auto* table = new splitree_table{};
        table->columns = v == Variant::Sort ? std::vector<std::string>{"n", "xi", "eta", "var"}
                                            : std::vector<std::string>{"n", "g", "h", "var"};
        for (const auto& record : records) {
            table->rows.push_back({std::to_string(record.n()), to_string(record.mean()),
                                   to_string(record.second_factorial()), to_string(record.variance())});
        }
        *out = table;
    });
}

splitree_status splitree_pgf_eval(splitree_context* context,
                                  splitree_variant variant,
                                  unsigned n,
                                  const char* z,
                                  char** out) {
    return guarded([&] {
        require(context != nullptr && z != nullptr && out != nullptr, "null argument");
        require(n <= context->exact_limit, "n exceeds the exact limit");
        *out = duplicate(to_string(pgf_eval(to_variant(variant), n, parse_rational(z))));
    });
}

splitree_status splitree_conflict_mean_series(splitree_context* context, unsigned n, const char* tol, char** out) {
    return guarded([&] {
        require(context != nullptr && tol != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        *out = duplicate(format(context, conflict_mean_series(n, parse_high_prec(tol))));
    });
}

splitree_status splitree_run_scripted_trial(splitree_context* context,
                                            splitree_variant variant,
                                            unsigned n,
                                            const uint8_t* bits,
                                            const size_t* lengths,
                                            size_t splits,
                                            uint64_t* statistic,
                                            splitree_table** trace) {
    return guarded([&] {
        require(context != nullptr, "null context");
        require(splits == 0 || (bits != nullptr && lengths != nullptr), "null script");
        std::vector<Bits> script;
        script.reserve(splits);
        std::size_t offset = 0;
        for (std::size_t i = 0; i < splits; ++i) {
            script.emplace_back(bits + offset, bits + offset + lengths[i]);
            offset += lengths[i];
        }
        auto source = CoinSource::scripted(std::move(script));
        deliver_trial(to_variant(variant), n, source, context, statistic, trace);
    });
}

splitree_status splitree_run_seeded_trial(splitree_context* context,
                                          splitree_variant variant,
                                          unsigned n,
                                          uint64_t seed,
                                          uint64_t stream,
                                          uint64_t* statistic,
                                          splitree_table** trace) {
    return guarded([&] {
        require(context != nullptr, "null context");
        auto source = CoinSource::seeded(seed, stream);
        deliver_trial(to_variant(variant), n, source, context, statistic, trace);
    });
}

splitree_status splitree_estimate(splitree_context* context,
                                  splitree_variant variant,
                                  unsigned n,
                                  uint64_t trials,
                                  uint64_t seed,
                                  splitree_table** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        Variant v = to_variant(variant);
        auto summary = estimate(v, n, trials, seed, context->options);
        auto* table = new splitree_table{
            {"variant", "n", "trials", "seed", "mean", "sample_variance", "std_error", "hypothesis"}, {}};
        table->rows.push_back({std::string{cli_name(v)}, std::to_string(n), std::to_string(trials),
                               std::to_string(seed), format(context, summary.mean),
                               format(context, summary.sample_variance), format(context, summary.std_error),
                               summary.hypothesis ? "true" : "false"});
        *out = table;
    });
}

splitree_status splitree_estimate_joint_election(splitree_context* context,
                                                 unsigned n,
                                                 uint64_t trials,
                                                 uint64_t seed,
                                                 splitree_table** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        auto summary = estimate_joint_election(n, trials, seed, context->options);
        auto* table = new splitree_table{{"n", "trials", "seed", "height_mean", "height_sample_variance",
                                          "height_std_error", "size_mean", "size_sample_variance",
                                          "size_std_error", "covariance", "covariance_std_error"},
                                         {}};
        table->rows.push_back({std::to_string(n), std::to_string(trials), std::to_string(seed),
                               format(context, summary.mean), format(context, summary.sample_variance),
                               format(context, summary.std_error), format(context, summary.size->mean),
                               format(context, summary.size->sample_variance),
                               format(context, summary.size->std_error), format(context, *summary.covariance),
                               format(context, *summary.covariance_std_error)});
        *out = table;
    });
}

size_t splitree_constant_count(void) {
    return ALL_CONSTANTS.size();
}

const char* splitree_constant_name(size_t index) {
    return index < ALL_CONSTANTS.size() ? constant_name(ALL_CONSTANTS[index]).data() : nullptr;
}

const char* splitree_constant_published(size_t index) {
    return index < ALL_CONSTANTS.size() ? published_value(ALL_CONSTANTS[index]).data() : nullptr;
}

unsigned splitree_constant_achievable_digits(size_t index) {
    return index < ALL_CONSTANTS.size() ? achievable_digits(ALL_CONSTANTS[index]) : 0;
}

splitree_status splitree_constant(splitree_context* context, const char* name, unsigned digits, char** out) {
    return guarded([&] {
        require(context != nullptr && name != nullptr && out != nullptr, "null argument");
        auto id = parse_constant(name);
        if (!id) {
            throw Error{ErrorCode::InvalidArgument, std::string{"unknown constant '"} + name + "'"};
        }
        if (digits == 0) {
            digits = context->precision;
        }
        *out = duplicate(to_string(constant(*id, digits), digits));
    });
}

splitree_status splitree_draw_size_offset_with(splitree_context* context, unsigned divisor, char** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        *out = duplicate(format(context, draw_size_offset_with(divisor)));
    });
}

splitree_status splitree_asymptotic_prediction(splitree_context* context,
                                               splitree_variant variant,
                                               unsigned n,
                                               char** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        *out = duplicate(format(context, asymptotic_prediction(to_variant(variant), n)));
    });
}

splitree_status splitree_residual_profile(splitree_context* context,
                                          splitree_variant variant,
                                          const unsigned* n_list,
                                          size_t count,
                                          splitree_table** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        require(count == 0 || n_list != nullptr, "null n list");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        auto profile = residual_profile(to_variant(variant), std::vector<unsigned>(n_list, n_list + count));
        auto* table = new splitree_table{{"n", "mean", "prediction", "residual"}, {}};
        for (const auto& point : profile.points) {
            table->rows.push_back({std::to_string(point.n), format(context, point.mean),
                                   format(context, point.prediction), format(context, point.residual)});
        }
        *out = table;
    });
}

splitree_status splitree_equation_residual(splitree_context* context,
                                           unsigned q,
                                           const char* lambda,
                                           const char* tol,
                                           unsigned k_max,
                                           char** out) {
    return guarded([&] {
        require(context != nullptr && lambda != nullptr && tol != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        HighPrec value = equation_residual(q, parse_high_prec(lambda), parse_high_prec(tol),
                                           k_max == 0 ? DEFAULT_SERIES_CAP : k_max);
        *out = duplicate(format(context, value));
    });
}

splitree_status splitree_lambda_critical(splitree_context* context,
                                         unsigned q,
                                         const char* tol,
                                         unsigned k_max,
                                         char** root,
                                         splitree_table** brackets) {
    return guarded([&] {
        require(context != nullptr && tol != nullptr && root != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        auto result = lambda_critical(q, parse_high_prec(tol), k_max == 0 ? DEFAULT_SERIES_CAP : k_max);
        if (brackets != nullptr) {
            auto* table = new splitree_table{{"lower", "upper", "selected"}, {}};
            for (std::size_t i = 0; i < result.brackets.size(); ++i) {
                table->rows.push_back({format(context, result.brackets[i].lower),
                                       format(context, result.brackets[i].upper),
                                       i == result.selected ? "true" : "false"});
            }
            *brackets = table;
        }
        *root = duplicate(format(context, result.lambda));
    });
}

splitree_status splitree_blocked_lambda(splitree_context* context, unsigned q, char** out) {
    return guarded([&] {
        require(context != nullptr && out != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        *out = duplicate(format(context, blocked_lambda(q)));
    });
}

splitree_status splitree_validate(splitree_context* context,
                                  unsigned n_max,
                                  uint64_t trials,
                                  uint64_t seed,
                                  splitree_table** report,
                                  size_t* failures) {
    return guarded([&] {
        require(context != nullptr && report != nullptr && failures != nullptr, "null argument");
        PrecisionScope scope{context->precision + GUARD_DIGITS};
        auto result = validate(n_max, trials, seed, context->options);
        auto* table =
            new splitree_table{{"check", "variant", "n", "expected", "observed", "statistic", "bound", "passed"}, {}};
        for (const auto& check : result.checks) {
            table->rows.push_back({std::string{check_kind_name(check.kind)}, std::string{cli_name(check.variant)},
                                   std::to_string(check.n), format(context, check.expected),
                                   format(context, check.observed), format(context, check.statistic),
                                   format(context, check.bound), check.passed ? "true" : "false"});
        }
        *failures = result.failures;
        *report = table;
    });
}

} // extern "C"
