// Command line front end. Talks to the library only through the C API.

#include "splitree/splitree.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

constexpr int EXIT_USAGE = 2;
constexpr int EXIT_LIMIT = 3;
constexpr int EXIT_VALIDATION = 4;
constexpr int EXIT_FAILURE_OTHER = 1;

//! A failed library call, carrying the process exit code it maps to.
class CallFailed : public std::runtime_error {
public:
    CallFailed(int exit_code, const std::string& message)
        : std::runtime_error(message), m_ExitCode(exit_code) {}

    int exit_code() const noexcept { return m_ExitCode; }

private:
    int m_ExitCode;
};

int exit_code_for(splitree_status status) {
    switch (status) {
    case SPLITREE_OK:
        return EXIT_SUCCESS;
    case SPLITREE_INVALID_ARGUMENT:
    case SPLITREE_UNSUPPORTED_VARIANT:
    case SPLITREE_DOMAIN_ERROR:
    case SPLITREE_SCRIPT_EXHAUSTED:
    case SPLITREE_SCRIPT_LENGTH_MISMATCH:
        return EXIT_USAGE;
    case SPLITREE_EXACT_LIMIT_EXCEEDED:
    case SPLITREE_PRECISION_UNACHIEVABLE:
    case SPLITREE_DEPTH_CAP_EXCEEDED:
        return EXIT_LIMIT;
    default:
        return EXIT_FAILURE_OTHER;
    }
}

void check(splitree_status status) {
    if (status != SPLITREE_OK) {
        throw CallFailed{exit_code_for(status), splitree_last_error()};
    }
}

struct ContextDeleter {
    void operator()(splitree_context* context) const { splitree_context_destroy(context); }
};
struct TableDeleter {
    void operator()(splitree_table* table) const { splitree_table_destroy(table); }
};
struct StringDeleter {
    void operator()(char* text) const { splitree_string_free(text); }
};
using ContextPtr = std::unique_ptr<splitree_context, ContextDeleter>;
using TablePtr = std::unique_ptr<splitree_table, TableDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string take_string(char* text) {
    StringPtr owned{text};
    return owned ? std::string{owned.get()} : std::string{};
}

//! Rows of string cells with named columns; the unit of output.
struct Records {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void append(const splitree_table* table) {
        if (columns.empty()) {
            for (std::size_t c = 0; c < splitree_table_columns(table); ++c) {
                columns.emplace_back(splitree_table_column_name(table, c));
            }
        }
        for (std::size_t r = 0; r < splitree_table_rows(table); ++r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < columns.size(); ++c) {
                row.emplace_back(splitree_table_cell(table, r, c));
            }
            rows.push_back(std::move(row));
        }
    }
};

// Columns holding machine integers; written as JSON numbers.
const std::set<std::string> INTEGER_COLUMNS{"n", "trials", "seed", "q", "id", "label", "digits",
                                            "achievable_digits", "brackets"};
const std::set<std::string> BOOLEAN_COLUMNS{"passed", "hypothesis", "selected", "agrees"};

ordered_json cell_json(const std::string& column, const std::string& cell) {
    if (INTEGER_COLUMNS.count(column) != 0 && !cell.empty() &&
        cell.find_first_not_of("0123456789") == std::string::npos) {
        return std::stoull(cell);
    }
    if (BOOLEAN_COLUMNS.count(column) != 0 && (cell == "true" || cell == "false")) {
        return cell == "true";
    }
    return cell;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

struct GlobalOptions {
    std::string format{"json"};
    unsigned precision{50};
    std::optional<std::uint64_t> seed;
};

void emit(const GlobalOptions& global,
          const std::string& command,
          const ordered_json& parameters,
          const Records& records,
          std::optional<std::uint64_t> seed) {
    if (global.format == "csv") {
        for (std::size_t c = 0; c < records.columns.size(); ++c) {
            std::cout << (c ? "," : "") << csv_field(records.columns[c]);
        }
        std::cout << '\n';
        for (const auto& row : records.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                std::cout << (c ? "," : "") << csv_field(row[c]);
            }
            std::cout << '\n';
        }
        return;
    }
    ordered_json results = ordered_json::array();
    for (const auto& row : records.rows) {
        ordered_json record = ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            record[records.columns[c]] = cell_json(records.columns[c], row[c]);
        }
        results.push_back(std::move(record));
    }
    ordered_json envelope;
    envelope["command"] = command;
    envelope["parameters"] = parameters;
    envelope["results"] = std::move(results);
    envelope["metadata"] = {{"tool_version", splitree_version()},
                            {"seed", seed ? ordered_json(*seed) : ordered_json(nullptr)},
                            {"precision", global.precision},
                            {"timestamp", utc_timestamp()}};
    std::cout << envelope.dump(2) << '\n';
}

splitree_variant parse_variant_or_throw(const std::string& name) {
    splitree_variant variant{};
    check(splitree_variant_parse(name.c_str(), &variant));
    return variant;
}

std::uint64_t resolve_seed(const GlobalOptions& global) {
    if (global.seed) {
        return *global.seed;
    }
    if (const char* text = std::getenv("SPLITREE_SEED")) {
        try {
            std::size_t used = 0;
            std::uint64_t value = std::stoull(text, &used);
            if (used == std::string{text}.size()) {
                return value;
            }
        } catch (const std::exception&) {
        }
        throw CallFailed{EXIT_USAGE, std::string{"SPLITREE_SEED is not an unsigned integer: "} + text};
    }
    return 1;
}

int run_exact(const GlobalOptions& global, splitree_context* context, const std::string& variantName, unsigned nMax) {
    if (variantName == "maxrev") {
        throw CallFailed{EXIT_USAGE, "no exact recurrence; use simulate"};
    }
    if (variantName == "election-joint") {
        throw CallFailed{EXIT_USAGE, "no exact recurrence for election-joint; use exact --variant height or size"};
    }
    splitree_table* raw = nullptr;
    check(splitree_moment_table(context, parse_variant_or_throw(variantName), nMax, &raw));
    TablePtr table{raw};
    Records records;
    records.append(table.get());
    emit(global, "exact", {{"variant", variantName}, {"n_max", nMax}}, records, std::nullopt);
    return EXIT_SUCCESS;
}

int run_simulate(const GlobalOptions& global,
                 splitree_context* context,
                 const std::string& variantName,
                 unsigned n,
                 std::uint64_t trials) {
    std::uint64_t seed = resolve_seed(global);
    splitree_table* raw = nullptr;
    if (variantName == "election-joint") {
        check(splitree_estimate_joint_election(context, n, trials, seed, &raw));
    } else {
        check(splitree_estimate(context, parse_variant_or_throw(variantName), n, trials, seed, &raw));
    }
    TablePtr table{raw};
    Records records;
    records.append(table.get());
    emit(global, "simulate", {{"variant", variantName}, {"n", n}, {"trials", trials}}, records, seed);
    return EXIT_SUCCESS;
}

int run_constants(const GlobalOptions& global, splitree_context* context, std::vector<std::string> names) {
    if (names.empty()) {
        for (std::size_t i = 0; i < splitree_constant_count(); ++i) {
            names.emplace_back(splitree_constant_name(i));
        }
    }
    Records records;
    records.columns = {"name", "value", "digits", "achievable_digits", "published"};
    for (const auto& name : names) {
        std::optional<std::size_t> index;
        for (std::size_t i = 0; i < splitree_constant_count(); ++i) {
            if (name == splitree_constant_name(i)) {
                index = i;
            }
        }
        if (!index) {
            throw CallFailed{EXIT_USAGE, "unknown constant '" + name + "'"};
        }
        unsigned achievable = splitree_constant_achievable_digits(*index);
        unsigned digits = std::min(global.precision, achievable);
        char* value = nullptr;
        check(splitree_constant(context, name.c_str(), digits, &value));
        records.rows.push_back({name, take_string(value), std::to_string(digits), std::to_string(achievable),
                                splitree_constant_published(*index)});
    }
    emit(global, "constants", {{"names", names}}, records, std::nullopt);
    return EXIT_SUCCESS;
}

int run_throughput(const GlobalOptions& global,
                   splitree_context* context,
                   std::vector<unsigned> qs,
                   const std::string& tol,
                   unsigned kMax) {
    if (qs.empty()) {
        qs = {2, 3, 4};
    }
    Records records;
    records.columns = {"q", "lambda_critical", "blocked_lambda", "brackets"};
    for (unsigned q : qs) {
        char* root = nullptr;
        splitree_table* rawBrackets = nullptr;
        check(splitree_lambda_critical(context, q, tol.c_str(), kMax, &root, &rawBrackets));
        TablePtr brackets{rawBrackets};
        std::string lambda = take_string(root);
        char* blocked = nullptr;
        check(splitree_blocked_lambda(context, q, &blocked));
        records.rows.push_back(
            {std::to_string(q), lambda, take_string(blocked), std::to_string(splitree_table_rows(brackets.get()))});
    }
    emit(global, "throughput", {{"q", qs}, {"tol", tol}, {"k_max", kMax}}, records, std::nullopt);
    return EXIT_SUCCESS;
}

int run_validate(const GlobalOptions& global, splitree_context* context, unsigned nMax, std::uint64_t trials) {
    std::uint64_t seed = resolve_seed(global);
    splitree_table* raw = nullptr;
    std::size_t failures = 0;
    check(splitree_validate(context, nMax, trials, seed, &raw, &failures));
    TablePtr table{raw};
    Records records;
    records.append(table.get());
    emit(global, "validate", {{"n_max", nMax}, {"trials", trials}, {"failures", failures}}, records, seed);
    std::cerr << "validate: " << records.rows.size() << " checks, " << failures << " failures\n";
    return failures == 0 ? EXIT_SUCCESS : EXIT_VALIDATION;
}

int run_pgf(const GlobalOptions& global,
            splitree_context* context,
            const std::string& variantName,
            unsigned n,
            const std::string& z) {
    char* value = nullptr;
    check(splitree_pgf_eval(context, parse_variant_or_throw(variantName), n, z.c_str(), &value));
    Records records;
    records.columns = {"n", "z", "value"};
    records.rows.push_back({std::to_string(n), z, take_string(value)});
    emit(global, "pgf", {{"variant", variantName}, {"n", n}, {"z", z}}, records, std::nullopt);
    return EXIT_SUCCESS;
}

int run_residuals(const GlobalOptions& global,
                  splitree_context* context,
                  const std::string& variantName,
                  const std::vector<unsigned>& ns) {
    splitree_table* raw = nullptr;
    check(splitree_residual_profile(context, parse_variant_or_throw(variantName), ns.data(), ns.size(), &raw));
    TablePtr table{raw};
    Records records;
    records.append(table.get());
    emit(global, "residuals", {{"variant", variantName}, {"n", ns}}, records, std::nullopt);
    return EXIT_SUCCESS;
}

const std::vector<std::string> VARIANT_NAMES{"conflict",  "height", "size", "draw-height", "draw-size",
                                             "coin",      "max",    "maxrev", "sort",      "election-joint"};

} // unnamed::

int main(int argc, char** argv) {
    CLI::App app{"Splitting-tree algorithms: exact moments, simulation, constants, throughput"};
    app.require_subcommand(1);
    // Global options may follow the subcommand.
    app.fallthrough();
    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--precision", global.precision, "Significant digits of decimal output")
        ->check(CLI::Range(1u, 1000u))
        ->capture_default_str();
    std::uint64_t seedValue = 0;
    auto* seedOption = app.add_option("--seed", seedValue, "Random seed (overrides SPLITREE_SEED)");
    unsigned threads = 0;
    app.add_option("--threads", threads, "Simulation threads, 0 for all cores")->capture_default_str();
    app.set_version_flag("--version", std::string{splitree_version()});

    std::string variant;
    unsigned nMax = 0;
    unsigned exactLimit = 512;
    auto* exact = app.add_subcommand("exact", "Exact moment table");
    exact->add_option("--variant", variant, "Algorithm variant")->required()->check(CLI::IsMember(VARIANT_NAMES));
    exact->add_option("--n-max", nMax, "Largest n")->required();
    exact->add_option("--exact-limit", exactLimit, "Refuse n_max above this")->capture_default_str();

    unsigned n = 0;
    std::uint64_t trials = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the mean and variance");
    simulate->add_option("--variant", variant, "Algorithm variant")->required()->check(CLI::IsMember(VARIANT_NAMES));
    simulate->add_option("--n", n, "Number of participants")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--trials", trials, "Number of trials")->required()->check(CLI::Range(2ULL, ~0ULL));

    std::vector<std::string> names;
    auto* constants = app.add_subcommand("constants", "Asymptotic constants");
    constants->add_option("--name", names, "Constant name (repeatable, default all)");

    std::vector<unsigned> qs;
    std::string tol;
    unsigned kMax = 200;
    auto* throughput = app.add_subcommand("throughput", "Maximum stable throughput");
    throughput->add_option("--q", qs, "Splitting arity (repeatable, default 2 3 4)")->check(CLI::Range(2u, 1000u));
    throughput->add_option("--tol", tol, "Root tolerance (default 1e-(precision+2))");
    throughput->add_option("--k-max", kMax, "Series term cap")->capture_default_str();

    std::uint64_t validateTrials = 200000;
    unsigned validateNMax = 8;
    auto* validate = app.add_subcommand("validate", "Cross-check simulation, exact and asymptotic values");
    validate->add_option("--n-max", validateNMax, "Largest n")->capture_default_str()->check(CLI::Range(2u, 512u));
    validate->add_option("--trials", validateTrials, "Trials per (variant, n)")
        ->capture_default_str()
        ->check(CLI::Range(2ULL, ~0ULL));

    std::string z;
    auto* pgf = app.add_subcommand("pgf", "Probability generating function at rational z");
    pgf->add_option("--variant", variant, "Algorithm variant")->required()->check(CLI::IsMember(VARIANT_NAMES));
    pgf->add_option("--n", n, "Number of participants")->required();
    pgf->add_option("--z", z, "Argument p/q in [0, 1]")->required();

    std::vector<unsigned> ns;
    auto* residuals = app.add_subcommand("residuals", "Exact mean minus asymptotic form");
    residuals->add_option("--variant", variant, "Algorithm variant")->required()->check(CLI::IsMember(VARIANT_NAMES));
    residuals->add_option("--n", ns, "Values of n (repeatable)")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        int code = app.exit(error);
        return code == 0 ? EXIT_SUCCESS : EXIT_USAGE;
    }
    if (*seedOption) {
        global.seed = seedValue;
    }

    try {
        splitree_context* rawContext = nullptr;
        check(splitree_context_create(&rawContext));
        ContextPtr context{rawContext};
        check(splitree_context_set_precision(context.get(), global.precision));
        check(splitree_context_set_threads(context.get(), threads));
        check(splitree_context_set_exact_limit(context.get(), exactLimit));

        if (*exact) {
            return run_exact(global, context.get(), variant, nMax);
        }
        if (*simulate) {
            return run_simulate(global, context.get(), variant, n, trials);
        }
        if (*constants) {
            return run_constants(global, context.get(), names);
        }
        if (*throughput) {
            if (tol.empty()) {
                tol = "1e-" + std::to_string(global.precision + 2);
            }
            return run_throughput(global, context.get(), qs, tol, kMax);
        }
        if (*validate) {
            return run_validate(global, context.get(), validateNMax, validateTrials);
        }
        if (*pgf) {
            return run_pgf(global, context.get(), variant, n, z);
        }
        if (*residuals) {
            return run_residuals(global, context.get(), variant, ns);
        }
    } catch (const CallFailed& failure) {
        std::cerr << "error: " << failure.what() << '\n';
        return failure.exit_code();
    } catch (const std::exception& failure) {
        std::cerr << "error: " << failure.what() << '\n';
        return EXIT_FAILURE_OTHER;
    }
    return EXIT_USAGE;
}
