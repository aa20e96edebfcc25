#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "fogbench/workloads.hpp"

using namespace fogbench;
using nlohmann::json;

namespace {

std::string data_dir() { return FOGBENCH_TEST_DATA_DIR; }

json plugin_doc() {
  return json::parse(R"({
    "name": "p",
    "services": [{"name": "a", "command": ["true"]}, {"name": "b", "command": ["true"], "output_ratio": 0.5}],
    "payloads": [{"id": "x", "bytes": 100}],
    "offload_asset": {"service": "b", "bytes": 77}
  })");
}

}  // namespace

TEST(Profiles, ShapesOfAllSix) {
  struct Shape {
    Profile p;
    std::vector<std::string> services;
    std::string type;
  };
  const Shape shapes[] = {
      {Profile::YoloLike, {"resize", "detect"}, "BI,CI"},
      {Profile::SphinxLike, {"recognize"}, "BI,CI"},
      {Profile::AeneasLike, {"align"}, "BI"},
      {Profile::PokemonLike, {"game"}, "LC,LA"},
      {Profile::FoglampLike, {"gateway"}, "LC"},
      {Profile::RealfdLike, {"GSC", "MD", "FD"}, "LC,BI,CI"},
  };
  for (const auto& s : shapes) {
    const auto w = make_profile(s.p);
    EXPECT_EQ(w.name, to_string(s.p));
    std::vector<std::string> names;
    for (const auto& svc : w.services) names.push_back(svc.name);
    EXPECT_EQ(names, s.services);
    EXPECT_EQ(w.labels.at("type"), s.type);
    EXPECT_EQ(w.assets.size(), 1u);
  }
  EXPECT_FALSE(make_profile(Profile::FoglampLike).requires_cloud_asset);
  EXPECT_TRUE(make_profile(Profile::SphinxLike).audio_length_seconds.has_value());
}

TEST(Profiles, RealfdShape) {
  const auto w = make_profile(Profile::RealfdLike);
  EXPECT_EQ(w.assets[0].payload_bytes, 900'000u);
  EXPECT_DOUBLE_EQ(w.services[0].output_ratio, 2.0 / 3.0);
  EXPECT_EQ(w.services[1].filter_probability, 0.6);
  EXPECT_EQ(w.services[2].output_ratio, 0.001);
}

TEST(Profiles, Overrides) {
  ProfileOverrides o;
  o.name = "yolo-3";
  o.asset_count = 3;
  o.asset_bytes = 1234;
  o.services["detect"].fixed_work = 5.0;
  const auto w = make_profile(Profile::YoloLike, o);
  EXPECT_EQ(w.name, "yolo-3");
  ASSERT_EQ(w.assets.size(), 3u);
  EXPECT_EQ(w.assets[2].id, "image-3");
  EXPECT_EQ(w.assets[1].payload_bytes, 1234u);
  EXPECT_EQ(w.find_service("detect")->fixed_work, 5.0);
  EXPECT_NE(w.assets[0].content_source, w.assets[1].content_source);

  ProfileOverrides bad;
  bad.services["nope"] = {};
  EXPECT_THROW(make_profile(Profile::YoloLike, bad), InvalidDescriptor);
  EXPECT_THROW(make_profile(Profile::Custom), InvalidDescriptor);
}

TEST(Plugins, ParseDescriptor) {
  const auto d = parse_plugin_descriptor(plugin_doc());
  ASSERT_EQ(d.services.size(), 2u);
  EXPECT_EQ(d.services[1].offload_payload_bytes, 77u);
  EXPECT_EQ(d.payloads[0].payload_bytes, 100u);
  const auto w = d.to_workload();
  EXPECT_EQ(w.profile, Profile::Custom);
  EXPECT_EQ(w.labels.at("plugin"), "p");
}

TEST(Plugins, RejectsMalformed) {
  auto doc = plugin_doc();
  doc["surprise"] = 1;
  EXPECT_THROW(parse_plugin_descriptor(doc), InvalidDescriptor);
  doc = plugin_doc();
  doc["services"][0].erase("command");
  EXPECT_THROW(parse_plugin_descriptor(doc), InvalidDescriptor);
  doc = plugin_doc();
  doc["payloads"] = json::array();
  EXPECT_THROW(parse_plugin_descriptor(doc), InvalidDescriptor);
  doc = plugin_doc();
  doc["offload_asset"]["service"] = "zzz";
  EXPECT_THROW(parse_plugin_descriptor(doc), InvalidDescriptor);
}

TEST(Plugins, LoadFromFile) {
  const auto d = load_plugin_descriptor(data_dir() + "/echo-plugin.json");
  EXPECT_EQ(d.name, "echo-plugin");
  EXPECT_EQ(d.services[0].offload_payload_bytes, 4096u);
  EXPECT_THROW(load_plugin_descriptor(data_dir() + "/does-not-exist.json"), Error);
}

TEST(Registry, BuiltinsAndPlugins) {
  WorkloadRegistry r;
  EXPECT_EQ(r.entries().size(), 6u);
  EXPECT_TRUE(r.contains("realfd-like"));
  EXPECT_EQ(r.register_plugin(parse_plugin_descriptor(plugin_doc())), "p");
  EXPECT_THROW(r.register_plugin(parse_plugin_descriptor(plugin_doc())), DuplicateName);
  EXPECT_EQ(r.get("p").services.size(), 2u);
  EXPECT_EQ(r.entries().back().source, "plugin");
  EXPECT_THROW(r.get("missing"), std::out_of_range);
}
