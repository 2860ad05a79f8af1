#include <gtest/gtest.h>

#include <filesystem>

#include "degtest/io.hpp"

using namespace degtest;

namespace {

BayesNetModel chain() { return {Dag{3, {{}, {0}, {0, 1}}}, {{0.3}, {0.2, 0.9}, {0.1, 0.4, 0.6, 0.75}}}; }

}  // namespace

TEST(ModelJson, RoundTripsExactly) {
  Rng rng(6);
  const auto net = random_net(random_dag(6, 2, rng), rng);
  const auto back = model_from_json(Json::parse(model_to_json(net).dump()));
  EXPECT_EQ(back.dag, net.dag);
  EXPECT_EQ(back.cpt, net.cpt);
}

TEST(ModelJson, RejectsUnknownKeysAndBadNets) {
  Json j = model_to_json(chain());
  j["colour"] = "red";
  EXPECT_THROW(model_from_json(j), FormatError);

  Json bad = model_to_json(chain());
  bad["cpt"][1][0] = 1.5;
  EXPECT_THROW(model_from_json(bad), FormatError);

  Json cyclic = model_to_json(chain());
  cyclic["parents"][0] = {2};
  cyclic["cpt"][0] = {0.5, 0.5};
  EXPECT_ANY_THROW(model_from_json(cyclic));

  Json with_prov = model_to_json(chain());
  with_prov["provenance"] = {{"seed", 1}};
  EXPECT_NO_THROW(model_from_json(with_prov));
}

TEST(MaskJson, RoundTrip) {
  const auto net = chain();
  SupportMask mask(net.dag);
  mask.exclude(2, 1, 3);
  mask.exclude(0, 0, 0);
  const auto back = mask_from_json(Json::parse(mask_to_json(mask).dump()), net.dag);
  EXPECT_EQ(back.excluded(), mask.excluded());
}

TEST(MaskJson, RejectsOutOfRangeAndMalformed) {
  const auto net = chain();
  EXPECT_THROW(mask_from_json(Json{{"excluded", {{0, 0, 5}}}}, net.dag), FormatError);
  EXPECT_THROW(mask_from_json(Json{{"excluded", {{0, 0}}}}, net.dag), FormatError);
  EXPECT_THROW(mask_from_json(Json{{"excluded", Json::array()}, {"extra", 1}}, net.dag), FormatError);
}

TEST(Csv, ParsesProvenanceHeaderAndRows) {
  const Json prov{{"seed", 5}, {"command", "risk"}};
  const auto table = parse_csv(csv_with_provenance(prov, "a,b\n1,2\n3,\n"));
  EXPECT_EQ(table.provenance, prov);
  EXPECT_EQ(table.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1], (std::vector<std::string>{"3", ""}));
}

TEST(Csv, RejectsRaggedRows) {
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), FormatError);
  EXPECT_THROW(parse_csv(""), FormatError);
}

TEST(Csv, MinimaxTableMatchesReport) {
  MinimaxReport r;
  r.trials.push_back({0, 42, 0.5, true, std::nullopt, std::nullopt});
  r.trials.push_back({1, 43, 0.25, false, 0.125, 0.99});
  const auto table = parse_csv(minimax_csv(r));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.header.size(), 6u);
  EXPECT_EQ(std::stod(table.rows[1][2]), 0.25);
  EXPECT_EQ(table.rows[0][3], "1");
  EXPECT_EQ(table.rows[0][4], "");
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0})
    EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(JsonFiles, WriteThenRead) {
  const auto dir = std::filesystem::temp_directory_path() / "degtest_io_test";
  std::filesystem::remove_all(dir);
  write_json(dir / "nested" / "m.json", model_to_json(chain()));
  EXPECT_EQ(model_from_json(read_json(dir / "nested" / "m.json")).cpt, chain().cpt);
  EXPECT_THROW(read_json(dir / "missing.json"), FormatError);
  std::filesystem::remove_all(dir);
}

TEST(ReportJson, TestReportFields) {
  TestReport r;
  r.accept = true;
  r.statistic = 1.5;
  r.mode = DistanceMode::tv;
  const Json j = to_json(r);
  EXPECT_EQ(j["verdict"], "accept");
  EXPECT_EQ(j["mode"], "tv");
  EXPECT_EQ(j["statistic"].get<double>(), 1.5);
}
