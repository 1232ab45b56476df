#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crisisnet/analytics.hpp"
#include "crisisnet/cascade.hpp"
#include "crisisnet/errors.hpp"
#include "crisisnet/exports.hpp"
#include "crisisnet/randomize.hpp"
#include "crisisnet/sha256.hpp"
#include "support/fixtures.hpp"

using namespace crisisnet;
using crisisnet::testing::m2_net;

TEST_CASE("sha256 matches the FIPS 180-4 vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // exercise multi-block streaming
    CHECK(sha256_hex(std::string(1000000, 'a')) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 of a file equals sha256 of its bytes") {
    const std::string path = "sha_roundtrip.tmp";
    {
        std::ofstream out(path, std::ios::binary);
        out << "some\nbytes\x01\x02";
    }
    CHECK(sha256_file_hex(path) == sha256_hex("some\nbytes\x01\x02"));
    std::remove(path.c_str());
    CHECK_THROWS_AS(sha256_file_hex("/nonexistent/nope.bin"), Error);
}

TEST_CASE("results and events csv round trip through the readers") {
    const MacroNet net = m2_net();
    const auto results = run_all(net, {});

    std::ostringstream events;
    write_events_csv(events, results);

    std::istringstream in(events.str());
    std::vector<std::string> codes;
    for (const Country& c : net.countries()) codes.push_back(c.code);
    const auto rebuilt = results_from_events(codes, read_events_csv(in));

    REQUIRE(rebuilt.size() == results.size());
    for (const auto& [seed, want] : results) {
        const AvalancheResult& got = rebuilt.at(seed);
        CHECK(got.size == want.size);
        CHECK(got.duration == want.duration);
        CHECK(got.profile == want.profile);
        REQUIRE(got.events.size() == want.events.size());
        for (std::size_t i = 0; i < want.events.size(); ++i) {
            CHECK(got.events[i].country == want.events[i].country);
            CHECK(got.events[i].step == want.events[i].step);
            CHECK(got.events[i].side == want.events[i].side);
            CHECK(got.events[i].cause == want.events[i].cause);
            CHECK(got.events[i].trigger == want.events[i].trigger);
            CHECK(got.events[i].label == want.events[i].label);
        }
    }
}

TEST_CASE("events reader rejects malformed input") {
    std::istringstream bad_header("seed,country,step\nA,B,1\n");
    CHECK_THROWS_AS(read_events_csv(bad_header), Error);
    std::istringstream bad_label(
        "seed,country,step,side,cause,trigger,label\nA,B,1,IN,DIRECT,A,NOT_A_LABEL\n");
    CHECK_THROWS_AS(read_events_csv(bad_label), Error);
    std::istringstream bad_step(
        "seed,country,step,side,cause,trigger,label\nA,B,x,IN,DIRECT,A,ONE_STEP_DIRECT\n");
    CHECK_THROWS_AS(read_events_csv(bad_step), Error);
}

TEST_CASE("results csv golden for m2") {
    std::ostringstream out;
    write_results_csv(out, run_all(m2_net(), {}));
    CHECK(out.str() ==
          "seed,size,duration,n_one_step_direct,n_multi_step_direct,n_indirect,n_residual\n"
          "A,3,3,1,0,1,1\n"
          "B,0,0,0,0,0,0\n"
          "D,2,1,2,0,0,0\n"
          "E,4,4,1,1,1,1\n"
          "F,0,0,0,0,0,0\n");
}

TEST_CASE("distribution, durations, and profile totals golden for m2") {
    const auto results = run_all(m2_net(), {});

    std::ostringstream dist;
    write_distribution_csv(dist, cumulative_size_counts(results));
    CHECK(dist.str() == "avalanche_size,countries_ge\n0,5\n1,3\n2,3\n3,2\n4,1\n");

    std::ostringstream dur;
    write_durations_csv(dur, results);
    CHECK(dur.str() == "duration,count\n0,2\n1,1\n3,1\n4,1\n");

    std::ostringstream prof;
    write_profile_totals_csv(prof, results);
    CHECK(prof.str() ==
          "label,count\nONE_STEP_DIRECT,4\nMULTI_STEP_DIRECT,1\nINDIRECT,2\nRESIDUAL,2\n");
}

TEST_CASE("gdp size csv golden for m2") {
    const MacroNet net = m2_net();
    std::ostringstream out;
    write_gdp_size_csv(out, net, run_all(net, {}));
    CHECK(out.str() ==
          "code,continent,gdp_musd,capacity_musd,size\n"
          "A,X1,100,100,3\n"
          "B,X1,10,10,0\n"
          "D,X1,20,20,2\n"
          "E,X2,1000,1000,4\n"
          "F,X1,5,5,0\n");
}

TEST_CASE("tgp and sweep csv shapes") {
    const MacroNet net = m2_net();
    std::ostringstream tgp;
    write_tgp_csv(tgp, tgp_profile(net, run_avalanche(net, "A", {})));
    CHECK(tgp.str() ==
          "partner,partner_gdp_musd,trade_volume_musd,collapsed\n"
          "B,10,2,true\n"
          "D,20,1.6,true\n"
          "E,1000,110,false\n");

    std::ostringstream sw;
    write_sweep_csv(sw, sweep(net, {0.5, 7.0}));
    std::istringstream lines(sw.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "ratio,f,t,max_size,sum_sizes,tail_slope,decades");
    std::getline(lines, line);
    CHECK(line.substr(0, 4) == "0.5,");
    CHECK(std::getline(lines, line));
}

TEST_CASE("dot exports carry continents and intra flags") {
    const MacroNet net = m2_net();
    const auto continents = continent_map(net);

    std::ostringstream forest;
    write_forest_dot(forest, max_spanning_forest(net), continents);
    const std::string f = forest.str();
    CHECK(f.find("graph spanning_forest {") == 0);
    CHECK(f.find("\"A\" [continent=\"X1\"];") != std::string::npos);
    CHECK(f.find("\"A\" -- \"E\" [weight=110, intra=false];") != std::string::npos);
    CHECK(f.find("\"D\" -- \"F\" [weight=1, intra=true];") != std::string::npos);

    std::ostringstream av;
    write_avalanche_dot(av, avalanche_network(run_all(net, {})), continents);
    const std::string a = av.str();
    CHECK(a.find("digraph avalanche_network {") == 0);
    CHECK(a.find("\"E\" -> \"A\" [intra=false];") != std::string::npos);
    CHECK(a.find("\"A\" -> \"B\" [intra=true];") != std::string::npos);
}

TEST_CASE("json payloads parse and carry the fixture numbers") {
    const MacroNet net = m2_net();
    const auto results = run_all(net, {});
    const auto continents = continent_map(net);
    const AvalancheNetwork avnet = avalanche_network(results);

    const auto coarse = nlohmann::json::parse(
        coarse_to_json(coarse_grain_continental(avnet, continents)));
    CHECK(coarse["continents"] == nlohmann::json::array({"X1", "X2"}));
    REQUIRE(coarse["flows"].size() == 2);
    CHECK(coarse["flows"][0]["from"] == "X1");
    CHECK(coarse["flows"][0]["weight"] == 5);

    std::vector<std::pair<std::string, std::string>> fe;
    for (const ForestEdge& e : max_spanning_forest(net).edges) fe.emplace_back(e.a, e.b);
    const auto intra = nlohmann::json::parse(
        intra_to_json(intra_continental_fraction(fe, continents),
                      intra_continental_fraction(avnet.edges, continents)));
    CHECK(intra["spanning_forest"]["intra"] == 3);
    CHECK(intra["spanning_forest"]["total"] == 4);
    CHECK(intra["avalanche_network"]["total"] == 9);

    const EnsembleSummary summary = ensemble(net, NullModel::GDN, 3, {}, 0);
    const auto ens = nlohmann::json::parse(ensemble_to_json(summary));
    CHECK(ens["model"] == "gdn");
    CHECK(ens["samples_ok"] == 3);
    CHECK(ens["stats"]["sum_sizes"]["observed"] == 9.0);
    CHECK(ens["stats"]["sum_sizes"]["values"].size() == 3);

    std::ostringstream raw;
    write_ensemble_samples_csv(raw, summary);
    std::istringstream lines(raw.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "sample,sum_sizes,typical_nonzero,likelihood,avalanche_edges,avalanche_intra,"
          "forest_intra");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("json export is byte-stable across calls") {
    const MacroNet net = m2_net();
    const EnsembleSummary a = ensemble(net, NullModel::GDN, 3, {}, 5);
    const EnsembleSummary b = ensemble(net, NullModel::GDN, 3, {}, 5);
    CHECK(ensemble_to_json(a) == ensemble_to_json(b));
}
