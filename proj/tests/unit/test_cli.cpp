#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

using nlohmann::json;

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(std::FILE* file) {
    std::string text;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = std::fread(buffer.data(), 1, buffer.size(), file)) > 0) {
        text.append(buffer.data(), got);
    }
    return text;
}

// Runs the tool through the shell; stderr goes to a temporary file.
Run run(const std::string& args, const std::string& env = "") {
    std::string err_path = "splitree_cli_stderr.txt";
    std::string command = env + " " + SPLITREE_CLI_PATH + " " + args + " 2>" + err_path;
    std::FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out = slurp(pipe);
    int status = pclose(pipe);
    std::string err;
    if (std::FILE* file = std::fopen(err_path.c_str(), "r")) {
        err = slurp(file);
        std::fclose(file);
    }
    std::remove(err_path.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in{text};
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::string field;
        std::istringstream fields{line};
        while (std::getline(fields, field, ',')) {
            row.push_back(field);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string as_text(const json& value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_boolean()) {
        return value.get<bool>() ? "true" : "false";
    }
    return value.dump();
}

} // namespace

TEST_CASE("exact table in the json envelope") {
    auto r = run("exact --variant conflict --n-max 3 --format json");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc.size() == 4);
    CHECK(doc.contains("command"));
    CHECK(doc.contains("parameters"));
    CHECK(doc.contains("results"));
    CHECK(doc.contains("metadata"));
    CHECK(doc["command"] == "exact");
    CHECK(doc["parameters"]["n_max"] == 3);
    const auto& meta = doc["metadata"];
    CHECK(meta["tool_version"] == "1.0.0");
    CHECK(meta["seed"].is_null());
    CHECK(meta["precision"] == 50);
    CHECK(meta["timestamp"].get<std::string>().size() == 20);
    const auto& row = doc["results"][3];
    CHECK(row["n"] == 3);
    CHECK(row["g"] == "23/3");
    CHECK(row["h"] == "548/9");
    CHECK(row["var"] == "88/9");
}

TEST_CASE("sort table") {
    auto r = run("exact --variant sort --n-max 3");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["results"][3]["xi"] == "8");
    CHECK(doc["results"][3]["eta"] == "190/3");
}

TEST_CASE("json output round-trips") {
    for (const char* args : {"exact --variant coin --n-max 5", "constants --name DRAW_SIZE_OFFSET",
                             "throughput --q 3 --precision 20", "simulate --variant sort --n 4 --trials 1000",
                             "pgf --variant conflict --n 2 --z 1/2", "residuals --variant height --n 64"}) {
        CAPTURE(args);
        auto r = run(args);
        REQUIRE(r.code == 0);
        json doc = json::parse(r.out);
        CHECK(json::parse(doc.dump()) == doc);
        CHECK(json::parse(doc.dump(2)) == doc);
    }
}

TEST_CASE("csv and json carry identical strings") {
    for (const char* args : {"exact --variant conflict --n-max 4", "constants --precision 20 --name CONFLICT_VAR_SLOPE --name HEIGHT_VAR_CONST --name DRAW_HEIGHT_OFFSET",
                             "throughput --precision 15 --q 2 --q 3", "simulate --variant max --n 3 --trials 5000 --seed 4",
                             "residuals --variant size --n 16 --n 32 --precision 20"}) {
        CAPTURE(args);
        auto j = run(std::string{args} + " --format json");
        auto c = run(std::string{args} + " --format csv");
        REQUIRE(j.code == 0);
        REQUIRE(c.code == 0);
        json doc = json::parse(j.out);
        auto rows = parse_csv(c.out);
        REQUIRE(rows.size() == doc["results"].size() + 1);
        const auto& header = rows[0];
        for (std::size_t r = 0; r < doc["results"].size(); ++r) {
            const auto& record = doc["results"][r];
            REQUIRE(record.size() == header.size());
            for (std::size_t col = 0; col < header.size(); ++col) {
                CHECK(as_text(record[header[col]]) == rows[r + 1][col]);
            }
        }
    }
}

TEST_CASE("constants and throughput values") {
    auto r = run("constants --name DRAW_SIZE_OFFSET --precision 12");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["results"][0]["value"].get<std::string>().rfind("-0.5986036178", 0) == 0);
    CHECK(doc["results"][0]["published"] == "-0.5986036178");

    r = run("throughput --q 3");
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["results"][0]["q"] == 3);
    CHECK(doc["results"][0]["lambda_critical"].get<std::string>().rfind("0.4015993701", 0) == 0);
    CHECK(doc["results"][0]["brackets"] == 1);

    r = run("constants --name SORT_MEAN_LIMIT --precision 30");
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["results"][0]["digits"] == 10);
}

TEST_CASE("simulation output and seeds") {
    auto r = run("simulate --variant maxrev --n 2 --trials 200000 --seed 7");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    const auto& row = doc["results"][0];
    CHECK(row["hypothesis"] == true);
    CHECK(doc["metadata"]["seed"] == 7);
    double mean = std::stod(row["mean"].get<std::string>());
    double se = std::stod(row["std_error"].get<std::string>());
    CHECK(std::abs(mean - 4.5) <= 4 * se);

    r = run("simulate --variant election-joint --n 8 --trials 100000 --seed 3");
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["results"][0].contains("covariance"));
    CHECK(doc["results"][0].contains("covariance_std_error"));

    auto a = run("simulate --variant conflict --n 5 --trials 10000 --seed 1");
    auto b = run("simulate --variant conflict --n 5 --trials 10000", "SPLITREE_SEED=1");
    auto c = run("simulate --variant conflict --n 5 --trials 10000 --seed 2", "SPLITREE_SEED=1");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    REQUIRE(c.code == 0);
    json ja = json::parse(a.out);
    json jb = json::parse(b.out);
    json jc = json::parse(c.out);
    CHECK(ja["results"] == jb["results"]);
    CHECK(jb["metadata"]["seed"] == 1);
    CHECK(jc["metadata"]["seed"] == 2);
    CHECK(ja["results"] != jc["results"]);
}

TEST_CASE("exit codes") {
    auto r = run("exact --variant maxrev --n-max 3");
    CHECK(r.code == 2);
    CHECK(r.err.find("no exact recurrence; use simulate") != std::string::npos);
    CHECK(run("exact --variant quicksort --n-max 3").code == 2);
    CHECK(run("simulate --variant conflict --n 3 --trials 1").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("pgf --variant conflict --n 3 --z 2").code == 2);
    CHECK(run("exact --variant conflict --n-max 600").code == 3);
    CHECK(run("exact --variant conflict --n-max 20 --exact-limit 10").code == 3);
    CHECK(run("constants --name HEIGHT_VAR_CONST --precision 30").code == 0);
    CHECK(run("residuals --variant height --n 100000").code == 3);
    CHECK(run("simulate --variant conflict --n 3 --trials 10", "SPLITREE_SEED=abc").code == 2);
    CHECK(run("--version").code == 0);
    CHECK(run("--help").code == 0);
}

TEST_CASE("validation exit codes") {
    auto ok = run("validate --n-max 3 --trials 20000 --seed 11");
    CHECK(ok.code == 0);
    json doc = json::parse(ok.out);
    CHECK(doc["parameters"]["failures"] == 0);
    for (const auto& row : doc["results"]) {
        CHECK(row["passed"] == true);
    }
    // Two trials per check: some exact mean is missed by a constant sample.
    auto bad = run("validate --n-max 4 --trials 2 --seed 5");
    CHECK(bad.code == 4);
    doc = json::parse(bad.out);
    CHECK(doc["parameters"]["failures"].get<int>() > 0);
}
