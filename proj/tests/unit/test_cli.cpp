#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rtpta/cli.hpp"

using namespace rtpta;
using namespace rtpta::cli;
namespace fs = std::filesystem;

namespace {

std::string model(const std::string &name) { return std::string(RTPTA_MODELS_DIR) + "/" + name; }

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("check exit codes") {
    CHECK(invoke({"check", model("idle_time.json"), "--at", "T1=60,T2=120"}).code == ok);
    CHECK(invoke({"check", model("idle_time.json"), "--at", "T1=40,T2=80"}).code == unschedulable);
    CHECK(invoke({"check", model("idle_time.json"), "--at", "T1=60,T3=1"}).code == usage);
    CHECK(invoke({"check", model("no_such_model.json"), "--at", "T1=60,T2=120"}).code == model_error);
    CHECK(invoke({"frobnicate"}).code == usage);
    CHECK(invoke({}).code == usage);
}

TEST_CASE("analyze and interface exit codes") {
    CHECK(invoke({"analyze", model("idle_time.json"), "--at", "T1=60,T2=120"}).code == ok);
    CHECK(invoke({"analyze", model("cyclic.json"), "--at", "T1=60,T2=120", "--depth", "30"}).code == inconclusive);
    CHECK(invoke({"interface", model("idle_time.json")}).code == model_error);
    CHECK(invoke({"interface", model("component.json"), "--discrete", "Nu=4..4", "--box", "P=48..50,D2=48..50"}).code ==
          unschedulable);
}

TEST_CASE("a faulty symbolic model is reported as a disagreement") {
    auto spec = rts::load_component(model("idle_time.json"));
    geometry::ParamPoint pt{{"T1", Rational(55)}, {"T2", Rational(110)}};
    auto good = check_point(spec, pt);
    CHECK(good.agree());
    CHECK(good.exit_code() == unschedulable);

    auto broken = spec;
    for (auto &t : broken.tasks) {
        if (t.name == "t2") {
            t.wcet = Rational(40);
        }
    }
    auto net = rts::build_component(broken);
    auto r = check_point(spec, pt, {}, &net);
    CHECK_FALSE(r.agree());
    CHECK(r.exit_code() == disagreement);
}

TEST_CASE("assignment and box parsing") {
    auto a = parse_assignment("T1=121/2,T2=120");
    CHECK(a.at("T1") == Rational(121, 2));
    CHECK(a.at("T2") == Rational(120));
    auto b = parse_box("P=20..50,D2=10..50");
    REQUIRE(b.size() == 2);
    CHECK(b[0].name == "P");
    CHECK(b[1].hi == Rational(50));
    CHECK_THROWS(parse_box("P=20"));
    CHECK_THROWS(parse_assignment("T1"));
}

TEST_CASE("cartography output is byte-identical across reruns and job counts") {
    auto dir = fs::temp_directory_path() / "rtpta_cli_test";
    fs::create_directories(dir);
    auto a = dir / "a.json", b = dir / "b.json";
    auto args = [&](const fs::path &p, const char *jobs) {
        return std::vector<std::string>{"cartography", model("idle_time.json"), "--box", "T1=40..120,T2=80..200",
                                        "--step", "20", "--jobs", jobs, "--out", p.string()};
    };
    REQUIRE(invoke(args(a, "1")).code == ok);
    REQUIRE(invoke(args(b, "3")).code == ok);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(fs::path(a).replace_extension(".csv")) == slurp(fs::path(b).replace_extension(".csv")));
    REQUIRE(invoke(args(b, "1")).code == ok);
    CHECK(slurp(a) == slurp(b));
    fs::remove_all(dir);
}

TEST_CASE("simulate prints the event log") {
    auto r = invoke({"simulate", model("idle_time.json"), "--at", "T1=60,T2=120", "--format", "tsv"});
    CHECK(r.code == ok);
    CHECK(r.out.find("111\tend\tt2") != std::string::npos);
}
