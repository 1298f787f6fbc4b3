#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mlsn/io.hpp"
#include "mlsn/synthgen.hpp"

using namespace mlsn;

TEST_CASE("edge file parsing") {
  std::istringstream in("layer,src,dst\ntwitter,a,b\nfoursquare,b,c\n\ntwitter,b,a\ntwitter,c,c\n");
  EdgeFileReport rep;
  auto g = read_edges(in, "e.csv", {}, &rep);
  CHECK(rep.rows == 4);
  CHECK(rep.duplicates == 1);
  CHECK(rep.self_loops == 1);
  CHECK(g.edge_count(0) == 1);
  CHECK(g.edge_count(1) == 1);
  CHECK(g.node_count() == 3);
}

TEST_CASE("empty edge file gives an empty graph") {
  std::istringstream in("layer,src,dst\n");
  auto g = read_edges(in, "e.csv", {});
  CHECK(g.node_count() == 0);
  CHECK(dataset_stats(g).mean_global_degree == 0.0);
}

TEST_CASE("edge file errors carry the line number") {
  std::istringstream bad_layer("layer,src,dst\ntwitter,a,b\nmyspace,a,b\n");
  try {
    read_edges(bad_layer, "e.csv", {});
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("e.csv:3:") == 0);
    CHECK(std::string(e.what()).find("myspace") != std::string::npos);
  }
  std::istringstream short_row("layer,src,dst\ntwitter,a\n");
  CHECK_THROWS_AS(read_edges(short_row, "e.csv", {}), ParseError);
  std::istringstream empty_field("layer,src,dst\ntwitter,,b\n");
  CHECK_THROWS_AS(read_edges(empty_field, "e.csv", {}), ParseError);
  std::istringstream no_header("twitter,a,b\n");
  CHECK_THROWS_AS(read_edges(no_header, "e.csv", {}), ParseError);
  std::istringstream nothing("");
  CHECK_THROWS_AS(read_edges(nothing, "e.csv", {}), ParseError);
}

TEST_CASE("reciprocal layers keep mutual follows only") {
  std::istringstream in(
      "layer,src,dst\ntwitter,u,v\ntwitter,v,u\ntwitter,u,w\nfoursquare,u,w\n");
  EdgeFileOptions opt;
  opt.reciprocal = {"twitter"};
  EdgeFileReport rep;
  auto g = read_edges(in, "e.csv", opt, &rep);
  CHECK(g.edge_count(0) == 1);
  CHECK(g.has_edge(0, g.node_id("u"), g.node_id("v")));
  CHECK(g.edge_count(1) == 1);
  CHECK(rep.one_way_dropped == 1);
  // w still exists through the other layer.
  CHECK(g.has_node("w"));
}

TEST_CASE("checkin and interaction parsing") {
  std::istringstream c("user,venue,lat,lon,timestamp\na,v,40.5,-73.9,100\n");
  auto recs = read_checkins(c, "c.csv");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].lat == 40.5);
  CHECK(recs[0].timestamp == 100);

  std::istringstream range("user,venue,lat,lon,timestamp\na,v,95,0,1\n");
  CHECK_THROWS_AS(read_checkins(range, "c.csv"), ParseError);
  std::istringstream clash("user,venue,lat,lon,timestamp\na,v,1,2,1\nb,v,1,3,1\n");
  CHECK_THROWS_AS(read_checkins(clash, "c.csv"), ParseError);
  std::istringstream time("user,venue,lat,lon,timestamp\na,v,1,2,1.5\n");
  CHECK_THROWS_AS(read_checkins(time, "c.csv"), ParseError);

  std::istringstream i(
      "kind,user_a,user_b_or_tag,timestamp\nmention,a,b,5\nhashtag,a,#NYC,6\n");
  auto inter = read_interactions(i, "i.csv");
  REQUIRE(inter.mentions.size() == 1);
  REQUIRE(inter.hashtags.size() == 1);
  CHECK(inter.hashtags[0].tag == "nyc");
  std::istringstream kind("kind,user_a,user_b_or_tag,timestamp\nlike,a,b,5\n");
  CHECK_THROWS_AS(read_interactions(kind, "i.csv"), ParseError);
}

TEST_CASE("all three formats round-trip") {
  GenConfig cfg;
  cfg.n_users = 200;
  const auto d = generate(cfg);

  std::stringstream e;
  write_edges(e, d.graph);
  const auto g = read_edges(e, "e", {});
  for (LayerId l = 0; l < 2; ++l) {
    REQUIRE(g.edge_count(l) == d.graph.edge_count(l));
    for (const Edge& x : d.graph.edges(l)) {
      REQUIRE(g.has_edge(l, g.node_id(d.graph.node_name(x.a)), g.node_id(d.graph.node_name(x.b))));
    }
  }

  std::stringstream c;
  write_checkins(c, d.checkins);
  const auto checkins = read_checkins(c, "c");
  REQUIRE(checkins.size() == d.checkins.size());
  for (std::size_t k = 0; k < checkins.size(); ++k) {
    REQUIRE(checkins[k].user == d.checkins[k].user);
    REQUIRE(checkins[k].venue == d.checkins[k].venue);
    REQUIRE(checkins[k].lat == d.checkins[k].lat);
    REQUIRE(checkins[k].lon == d.checkins[k].lon);
    REQUIRE(checkins[k].timestamp == d.checkins[k].timestamp);
  }

  std::stringstream i;
  write_interactions(i, d.mentions, d.hashtags);
  const auto inter = read_interactions(i, "i");
  REQUIRE(inter.mentions.size() == d.mentions.size());
  REQUIRE(inter.hashtags.size() == d.hashtags.size());
  for (std::size_t k = 0; k < inter.mentions.size(); ++k) {
    REQUIRE(inter.mentions[k].source == d.mentions[k].source);
    REQUIRE(inter.mentions[k].target == d.mentions[k].target);
    REQUIRE(inter.mentions[k].timestamp == d.mentions[k].timestamp);
  }
  for (std::size_t k = 0; k < inter.hashtags.size(); ++k) {
    REQUIRE(inter.hashtags[k].user == d.hashtags[k].user);
    REQUIRE(inter.hashtags[k].tag == d.hashtags[k].tag);
  }
}

TEST_CASE("feature csv round-trips exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1e3);
  LabeledDataset ds;
  ds.kind = FeatureSetKind::Foursquare;
  for (int k = 0; k < 200; ++k) {
    ds.pairs.push_back({"u" + std::to_string(k), "u" + std::to_string(k + 1),
                        {u(rng), u(rng) / 7, 1.0 / 3, 0.0}, k % 2 ? 1 : -1, false});
  }
  std::stringstream out;
  write_features(out, ds);
  CHECK(out.str().rfind("i,j,label,colocs,dist,overlap_F,aa_sim_F\n", 0) == 0);
  const auto back = read_features(out, "f");
  CHECK(back.kind == FeatureSetKind::Foursquare);
  REQUIRE(back.pairs.size() == ds.pairs.size());
  for (std::size_t k = 0; k < ds.pairs.size(); ++k) {
    REQUIRE(back.pairs[k].features == ds.pairs[k].features);
    REQUIRE(back.pairs[k].label == ds.pairs[k].label);
    REQUIRE(back.pairs[k].i == ds.pairs[k].i);
  }
  const auto s = to_samples(back);
  CHECK(s.size() == 200);
  CHECK(s.n_features() == 4);

  std::istringstream bad("i,j,label,colocs,dist,overlap_F,aa_sim_F\na,b,0,1,2,3,4\n");
  CHECK_THROWS_AS(read_features(bad, "f"), ParseError);
  std::istringstream unknown("i,j,label,x,y,z,w\n");
  CHECK_THROWS_AS(read_features(unknown, "f"), ParseError);
}

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng);
    REQUIRE(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("roc csv and file digests") {
  RocResult r;
  r.points = {{std::numeric_limits<double>::infinity(), 0, 0}, {0.5, 0.5, 1}, {0.1, 1, 1}};
  std::stringstream out;
  write_roc(out, r);
  CHECK(out.str() == "threshold,fpr,tpr\ninf,0,0\n0.5,0.5,1\n0.1,1,1\n");

  const auto path = std::filesystem::temp_directory_path() / "mlsn_digest_test.txt";
  {
    std::ofstream f(path, std::ios::binary);
    f << "a";
  }
  // FNV-1a of "a".
  CHECK(file_digest(path.string()) == "af63dc4c8601ec8c");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(file_digest("/nonexistent/file"), InputError);
}
