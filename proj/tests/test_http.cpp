#include "tedm/csv.hpp"
#include "tedm/server.hpp"

#include <doctest.h>
#include <httplib.h>

#include <sstream>
#include <thread>

using namespace tedm;
using namespace tedm::service;
using nlohmann::json;

namespace {

json fixture(const std::string& name) {
    return json::parse(csv::read_file(TEDM_SOURCE_DIR "/data/fixtures/" + name), nullptr, true, true);
}

/// Server on a free loopback port for the lifetime of the object.
struct LiveServer {
    Service service;
    HttpServer server{service};
    int port = server.bind("127.0.0.1", 0);
    std::thread thread{[this] { server.listen(); }};

    LiveServer() { server.wait_until_ready(); }
    ~LiveServer() {
        server.stop();
        thread.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(30, 0);
        return c;
    }
};

}  // namespace

TEST_CASE("every route answers with the service's status and body") {
    LiveServer live;
    auto c = live.client();
    Service direct;

    struct Case {
        const char* path;
        json body;
        Response expected;
    };
    json spec = fixture("uniswap.tedm.json");
    std::vector<Case> cases = {
        {"/api/v1/validate", fixture("currynomics.tedm.json"), direct.validate(fixture("currynomics.tedm.json"))},
        {"/api/v1/metrics", {{"weights", {40, 30, 20, 10}}}, direct.metrics({{"weights", {40, 30, 20, 10}}})},
        {"/api/v1/compare", {{"a", spec}, {"b", fixture("curve.tedm.json")}},
         direct.compare({{"a", spec}, {"b", fixture("curve.tedm.json")}})},
        {"/api/v1/recommend", {{"require", {{"accountability", 2}}}}, direct.recommend({{"require", {{"accountability", 2}}}})},
        {"/api/v1/simulate", {{"preset", "capture"}, {"spec", spec}, {"epochs", 55}},
         direct.simulate({{"preset", "capture"}, {"spec", spec}, {"epochs", 55}})},
        {"/api/v1/tally", {{"mechanism", {{"family", "bogus"}}}, {"voters", json::array()}, {"ballots", json::array()}},
         direct.tally({{"mechanism", {{"family", "bogus"}}}, {"voters", json::array()}, {"ballots", json::array()}})},
    };
    for (const auto& tc : cases) {
        auto res = c.Post(tc.path, tc.body.dump(), "application/json");
        REQUIRE_MESSAGE(res, tc.path);
        INFO(tc.path);
        CHECK(res->status == tc.expected.status);
        CHECK(json::parse(res->body) == tc.expected.body);
        CHECK(res->get_header_value("Content-Type") == "application/json");
        CHECK(res->get_header_value("X-Content-Hash").size() == 16);
    }

    auto presets = c.Get("/api/v1/presets");
    REQUIRE(presets);
    CHECK(json::parse(presets->body) == direct.presets().body);
    auto matrix = c.Get("/api/v1/matrix");
    REQUIRE(matrix);
    CHECK(json::parse(matrix->body) == direct.matrix().body);
}

TEST_CASE("malformed bodies, unknown routes and content hashes") {
    LiveServer live;
    auto c = live.client();
    auto bad = c.Post("/api/v1/metrics", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body)["error"]["code"] == "SchemaError");

    auto missing = c.Get("/api/v1/nothing");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    // whitespace does not change the hash; content does
    auto a = c.Post("/api/v1/metrics", R"({"weights":[1,2]})", "application/json");
    auto b = c.Post("/api/v1/metrics", "{ \"weights\" : [1, 2] }", "application/json");
    auto d = c.Post("/api/v1/metrics", R"({"weights":[1,3]})", "application/json");
    REQUIRE((a && b && d));
    CHECK(a->get_header_value("X-Content-Hash") == b->get_header_value("X-Content-Hash"));
    CHECK(a->get_header_value("X-Content-Hash") != d->get_header_value("X-Content-Hash"));
}

TEST_CASE("streamed simulation sends one line per epoch then the summary") {
    LiveServer live;
    auto c = live.client();
    json request = {{"preset", "capture"}, {"spec", fixture("uniswap.tedm.json")}, {"epochs", 52}};
    auto res = c.Post("/api/v1/simulate?stream=1", request.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/x-ndjson");
    std::istringstream lines(res->body);
    std::vector<json> parsed;
    for (std::string line; std::getline(lines, line);) parsed.push_back(json::parse(line));
    REQUIRE(parsed.size() == 53);
    for (int i = 0; i < 52; ++i) CHECK(parsed[static_cast<std::size_t>(i)]["epoch"] == i + 1);
    CHECK(parsed[49]["capture"] == true);
    CHECK(parsed.back()["summary"] == Service().simulate(request).body);

    json broken = request;
    broken["preset"] = "nope";
    auto err = c.Post("/api/v1/simulate?stream=1", broken.dump(), "application/json");
    REQUIRE(err);
    auto last = json::parse(err->body);
    CHECK(last["status"] == 400);
    CHECK(last["error"]["code"] == "UnknownPreset");
}

TEST_CASE("concurrent clients") {
    LiveServer live;
    json spec = fixture("uniswap.tedm.json");
    std::vector<std::thread> threads;
    std::vector<int> statuses(6, 0);
    std::vector<json> bodies(6);
    for (int i = 0; i < 6; ++i)
        threads.emplace_back([&, i] {
            auto c = live.client();
            json req = {{"preset", "sell_off_cascade"}, {"spec", spec}, {"epochs", 12}, {"seed", i % 3}};
            if (auto res = c.Post("/api/v1/simulate", req.dump(), "application/json")) {
                statuses[static_cast<std::size_t>(i)] = res->status;
                bodies[static_cast<std::size_t>(i)] = json::parse(res->body);
            }
        });
    for (auto& t : threads) t.join();
    for (int i = 0; i < 6; ++i) CHECK(statuses[static_cast<std::size_t>(i)] == 200);
    for (int i = 0; i < 3; ++i) CHECK(bodies[static_cast<std::size_t>(i)] == bodies[static_cast<std::size_t>(i + 3)]);
    CHECK(live.service.cache_size() == 3);
}
