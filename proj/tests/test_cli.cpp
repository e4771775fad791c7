#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct run_result {
    std::string out;
    int exit_code = -1;
};

std::string binary() {
    const char* bin = std::getenv("HYPERTERM_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

run_result run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    run_result r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("eval emits the record with the expected value and exit 0") {
    const auto r = run("eval --a 1 --b 1 --n 1/2 --method integral --format json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["a"] == 1.0);
    CHECK(j["b"] == 1.0);
    CHECK(j["n"] == 0.5);
    CHECK(j["method"] == "integral");
    CHECK(std::abs(j["value"].get<double>() - 0.886226925452758) < 1e-12);
    CHECK(j["divergent"] == false);
    CHECK(j["effort"].get<long long>() >= 1);
    CHECK(j["error_estimate"].get<double>() >= 0.0);
}

TEST_CASE("eval accepts exact fractions and the oracle route") {
    const auto r = run("eval --a 1 --b 1 --n 1/3 --method oracle --format json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["value"].get<double>() - 0.892979511569249) < 1e-12);
    CHECK(j["method"] == "oracle");
}

TEST_CASE("integral route shifts indices outside the unit interval") {
    const auto up = run("eval --a 1 --b 1 --n 4/3 --method integral --format json");
    REQUIRE(up.exit_code == 0);
    CHECK(std::abs(json::parse(up.out)["value"].get<double>() -
                   (4.0 / 3.0) * 0.892979511569249) < 1e-10);

    const auto down =
        run("eval --a 1 --b 1 --n -1/2 --method integral --format json");
    REQUIRE(down.exit_code == 0);
    CHECK(std::abs(json::parse(down.out)["value"].get<double>() -
                   1.772453850905516) < 1e-10);

    // fractional part not 1/2 or 1/3: the route is unavailable
    CHECK(run("eval --a 1 --b 1 --n 0.7 --method integral").exit_code == 1);
}

TEST_CASE("divergent input emits the flagged record and exits 2") {
    const auto r = run("eval --a 1 --b 2 --n -1/2 --format json");
    REQUIRE(r.exit_code == 2);
    const json j = json::parse(r.out);
    CHECK(j["divergent"] == true);
    CHECK(j["value"].is_null());
}

TEST_CASE("exit codes cover usage and parameter errors") {
    CHECK(run("eval --a 1 --b 1 --n 1 --nonsense 2").exit_code == 64);
    CHECK(run("nonsense").exit_code == 64);
    CHECK(run("eval --a 1 --b 1 --n abc").exit_code == 64);
    CHECK(run("eval --a -1 --b 1 --n 1").exit_code == 1);
    CHECK(run("table --a 1 --b 1 --frac 3/2").exit_code == 1);
}

TEST_CASE("json numbers survive a parse/serialize round trip bit-exactly") {
    const auto r =
        run("eval --a 1 --b 1 --n 1/2 --method product --format json"
            " --precision 17");
    REQUIRE(r.exit_code == 0);
    const json first = json::parse(r.out);
    const json second = json::parse(first.dump());
    CHECK(first["value"].get<double>() == second["value"].get<double>());
    CHECK(first["error_estimate"].get<double>() ==
          second["error_estimate"].get<double>());
    CHECK(first.dump() == second.dump());
}

TEST_CASE("table rows satisfy the shift recurrence") {
    const auto r = run("table --a 1 --b 2 --frac 1/2 --count 6 --format json"
                       " --precision 17");
    REQUIRE(r.exit_code == 0);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 6);
    for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
        const double index = rows[j]["index"].get<double>();
        const double cur = rows[j]["value"].get<double>();
        const double next = rows[j + 1]["value"].get<double>();
        const double factor = 1.0 + index * 2.0; // a + (frac + j) b
        CHECK(std::abs(next - factor * cur) / std::abs(next) < 1e-12);
    }
    CHECK(std::abs(rows[0]["value"].get<double>() - 0.7978845608028654) < 1e-9);
}

TEST_CASE("converge rows are monotone in tolerance per strategy") {
    const auto r = run("converge --a 1 --b 1 --n 1/2 --alpha a --alpha accel"
                       " --tol 1e-4 --tol 1e-6 --tol 1e-8 --tol 1e-10"
                       " --format json");
    REQUIRE(r.exit_code == 0);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 8);
    double alpha = -1.0;
    long long prev_terms = 0;
    for (const auto& row : rows) {
        const double row_alpha = row["alpha"].get<double>();
        const long long terms = row["terms"].get<long long>();
        const double tol = row["tol"].get<double>();
        if (row_alpha != alpha) {
            alpha = row_alpha;
            prev_terms = 0;
        }
        CHECK(terms >= prev_terms);
        prev_terms = terms;
        CHECK(row["abs_rel_error_vs_oracle"].get<double>() < tol);
    }
}

TEST_CASE("compare agrees across routes and reports skipped integrals") {
    const auto r = run("compare --a 1 --b 1 --n 1/2 --format json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["max_rel_diff"].get<double>() < 1e-8);
    CHECK(j["integral"].is_number());

    const auto skipped = run("compare --a 2 --b 3 --n 0.7 --format json");
    REQUIRE(skipped.exit_code == 0);
    const json s = json::parse(skipped.out);
    CHECK(s["integral"].is_null());
    CHECK(s["max_rel_diff"].get<double>() < 1e-7);
}

TEST_CASE("csv output has a header row and unquoted numeric fields") {
    const auto r = run("table --a 1 --b 1 --frac 1/2 --count 2 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("index,value\r\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}
