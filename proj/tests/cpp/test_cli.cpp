#include <doctest.h>

#include <json.hpp>

#include "hahnmeasure/driver.hpp"

using namespace hm;

namespace {
DriverResult run(std::vector<std::string> args) { return run_command(args); }
} // namespace

TEST_CASE("documented command gallery, text mode") {
    auto check_out = [&](std::vector<std::string> args, const std::string& expect) {
        DriverResult r = run(std::move(args));
        CAPTURE(r.output);
        CHECK(r.exit_code == 0);
        CHECK(r.output == expect + "\n");
    };
    check_out({"integrate", "1/x", "on", "[1, t^(-1)]"}, "X");
    check_out({"measure", "[0, t^(-1/2)]"}, "t^(-1/2)");
    check_out({"limit", "--at", "inf", "log(x)"}, "no-limit");
    check_out({"eval", "t^(-1)+1"}, "t^(-1) + 1");
    check_out({"eval", "(1+t)*(1-t)"}, "1 - t^(2)");
    check_out({"measure", "region x in [1, t^(-1)]; y in [0, 1/x]"}, "X");
    check_out({"stdpart", "3+t"}, "3");
    check_out({"stdpart", "t^(-1)"}, "infinite");
    check_out({"compare", "22/7", "pi"}, "greater");
    check_out({"compare", "2*arctan(1)", "pi/2"}, "equal");
    check_out({"limit", "--at", "0", "--side", "right", "1/x"}, "+infinity");
    check_out({"iso", "--section", "t^(-1) -> 2*t^(-1)"}, "X -> X + log(2)");
    check_out({"eval", "log(t^(-1))"}, "X");
    check_out({"measure", "{0} u {1}"}, "0");
    check_out({"measure", "[0,1] u [2,3]"}, "2");
    check_out({"measure", "]0, 1["}, "1");
    check_out({"measure", "[0, inf["}, "infinite");
    check_out({"eval", "1/3 + 1/6"}, "1/2");
    check_out({"integrate", "x", "on", "[0,1] u [2,3]"}, "3");
}

TEST_CASE("exit codes") {
    CHECK(run({"integrate", "1/x", "on", "[0,1]"}).exit_code == 2);
    CHECK(run({"integrate", "arctan(x)", "on", "[0,1]"}).exit_code == 2);
    CHECK(run({"eval", "1/(pi-pi)"}).exit_code == 2);
    CHECK(run({"nonsense"}).exit_code == 1);
    CHECK(run({"eval", "1 +"}).exit_code == 1);
    CHECK(run({}).exit_code == 1);
    // precision exhaustion: a true identity outside the normalization table
    CHECK(run({"--const-bits", "64", "compare", "4*arctan(1/5) - arctan(1/239)",
               "pi/4"}).exit_code == 3);
}

TEST_CASE("json output schema") {
    DriverResult r = run({"--format", "json", "integrate", "1/x", "on", "[1, t^(-1)]"});
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    CHECK(j["schema"] == 1);
    CHECK(j["status"] == "ok");
    CHECK(j["command"] == "integrate");
    CHECK(j["value"]["type"] == "algebra");
    CHECK(j["degree"] == 1);
    DriverResult m = run({"--format", "json", "measure", "[2, 5]"});
    Json jm = Json::parse(m.output);
    CHECK(jm["value"]["type"] == "series");
    CHECK(jm["value"]["terms"][0]["coeff"] == "3");
    CHECK(jm["precision"] == "exact");
    // truncated results carry their knowledge bound
    DriverResult tr = run({"--format", "json", "integrate", "1/(1-t+x)", "on", "[0,1]"});
    Json jtr = Json::parse(tr.output);
    CHECK(jtr["precision"] == "8");
}

TEST_CASE("oracle command") {
    DriverResult r = run({"--format", "json", "oracle", "integrate", "1/x", "on",
                          "[1, t^(-1)]"});
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    double rel = j["oracle_check"]["rel_err"].get<double>();
    CHECK(rel < 1e-9);
    // interval length: rel err essentially zero
    DriverResult r2 = run({"--format", "json", "oracle", "measure", "[0, 2]"});
    Json j2 = Json::parse(r2.output);
    CHECK(j2["oracle_check"]["rel_err"].get<double>() < 1e-12);
    // unavailable elsewhere
    CHECK(run({"oracle", "stdpart", "t"}).exit_code == 2);
}

TEST_CASE("parser round trips on rendered output") {
    // render(parse(x)) reparses to an equal value
    for (const std::string& text :
         {"t^(-1) + 2*t^(1/2) - 3", "1/2 + log(2)", "pi*t^(2)", "X^2 - 1",
          "sqrt(2)*X + 1 - t", "arctan(1/3) + arcsin(1/2)", "2 - t + t^(7/3)"}) {
        DriverResult r1 = run({"eval", text});
        REQUIRE(r1.exit_code == 0);
        std::string rendered = r1.output.substr(0, r1.output.size() - 1);
        DriverResult r2 = run({"eval", rendered});
        REQUIRE(r2.exit_code == 0);
        CHECK(r1.output == r2.output);
    }
}

TEST_CASE("precision flag and truncated literals") {
    DriverResult r = run({"--precision", "4", "eval", "1/(1-t)"});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("O(t^(4))") != std::string::npos);
    DriverResult r2 = run({"eval", "1 + t + O(t^(2))"});
    CHECK(r2.output == "1 + t + O(t^(2))\n");
    // HM_PRECISION env override
    setenv("HM_PRECISION", "3", 1);
    DriverResult r3 = run({"eval", "1/(1-t)"});
    unsetenv("HM_PRECISION");
    CHECK(r3.output.find("O(t^(3))") != std::string::npos);
}

TEST_CASE("group selector") {
    DriverResult r = run({"--group", "Q+Q*sqrt(2)", "measure", "[0, t^(-1)]"});
    CHECK(r.exit_code == 0);
    CHECK(r.output == "t^(-1)\n");
    DriverResult w = run({"witness-rank2", "--zeta", "sqrt(2)", "--unit", "1+t"});
    CHECK(w.exit_code == 0);
    CHECK(w.output.find("non-isomorphic") != std::string::npos);
}

TEST_CASE("convolve and coeffs commands") {
    DriverResult r = run({"convolve", "--h", "t", "[-1,1]: 1"});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("arctan") != std::string::npos);
    DriverResult c = run({"coeffs", "--interval", "[1,2]", "x + x^2*X"});
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("h0 = x") != std::string::npos);
    CHECK(c.output.find("h1 = x^(2)") != std::string::npos);
}

TEST_CASE("transform-check command") {
    DriverResult r = run({"transform-check", "--phi", "x + t^(-1)", "--f", "1", "--on",
                          "[0,1]"});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("equal") != std::string::npos);
}
