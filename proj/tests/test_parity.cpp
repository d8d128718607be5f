// The CLI's JSON output must equal the service response for the same request.

#include "tedm/csv.hpp"
#include "tedm/service.hpp"
#include "tedm/snapshot.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <memory>

using namespace tedm;
using namespace tedm::service;
using nlohmann::json;

namespace {

const std::string kRoot = TEDM_SOURCE_DIR;

struct Run {
    int exit_code;
    json body;
};

Run cli(const std::string& args) {
    const std::string command = std::string(TEDM_CLI) + " --format json " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe.get())) > 0;) out.append(buf, n);
    int status = pclose(pipe.release());
    return {WEXITSTATUS(status), json::parse(out)};
}

json doc(const std::string& relative) {
    return json::parse(csv::read_file(kRoot + "/" + relative), nullptr, true, true);
}

void same(const Run& run, const Response& expected) {
    CHECK(run.exit_code == expected.exit_code());
    CHECK(run.body == expected.body);
}

}  // namespace

TEST_CASE("validate, metrics and compare") {
    Service s;
    same(cli("validate " + kRoot + "/data/fixtures/currynomics.tedm.json"),
         s.validate(doc("data/fixtures/currynomics.tedm.json")));
    same(cli("metrics " + kRoot + "/data/snapshots/four_holders.csv"),
         s.metrics({{"csv", csv::read_file(kRoot + "/data/snapshots/four_holders.csv")}}));
    same(cli("metrics " + kRoot + "/data/snapshots/ve_locks.csv --escrow-epoch 52 --lock-max 208"),
         s.metrics({{"csv", csv::read_file(kRoot + "/data/snapshots/ve_locks.csv")},
                    {"escrow", {{"current_epoch", 52}, {"lock_max", 208}}}}));
    same(cli("compare " + kRoot + "/data/fixtures/uniswap.tedm.json " + kRoot + "/data/fixtures/curve.tedm.json"),
         s.compare({{"a", doc("data/fixtures/uniswap.tedm.json")}, {"b", doc("data/fixtures/curve.tedm.json")}}));
}

TEST_CASE("recommend, presets and matrix") {
    Service s;
    same(cli("recommend --require accountability=2 security=1 --prefer simplicity"),
         s.recommend({{"require", {{"accountability", 2}, {"security", 1}}}, {"prefer", {"simplicity"}}}));
    same(cli("presets"), s.presets());
    same(cli("matrix"), s.matrix());
}

TEST_CASE("simulate") {
    Service s;
    same(cli("simulate --preset capture --spec " + kRoot + "/data/fixtures/uniswap.tedm.json --epochs 55 --seed 3"),
         s.simulate({{"preset", "capture"}, {"spec", doc("data/fixtures/uniswap.tedm.json")}, {"epochs", 55}, {"seed", 3}}));
    s.set_base_dir(kRoot + "/data/scenarios");
    same(cli("simulate " + kRoot + "/data/scenarios/uniswap_whale.scenario.json"),
         s.simulate({{"scenario", doc("data/scenarios/uniswap_whale.scenario.json")}}));
}

TEST_CASE("failures carry the same body and exit code") {
    Service s;
    same(cli("simulate --preset nope --spec " + kRoot + "/data/fixtures/uniswap.tedm.json"),
         s.simulate({{"preset", "nope"}, {"spec", doc("data/fixtures/uniswap.tedm.json")}}));
}

TEST_CASE("tally") {
    auto votes = snapshot::parse_vote_csv(csv::read_file(kRoot + "/data/snapshots/votes.csv"));
    governance::Proposal p;
    p.id = "proposal";
    governance::VotingMechanism m;
    m.family = governance::Family::quadratic;
    auto run = cli("tally " + kRoot + "/data/snapshots/votes.csv --mechanism quadratic");
    CHECK(run.exit_code == 0);
    json expected = tally_json(governance::tally(p, votes.voters, votes.ballots, m));
    expected["proposal"] = "proposal";
    expected["mechanism"] = "quadratic";
    CHECK(run.body == expected);
}
