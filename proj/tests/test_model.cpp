#include <gtest/gtest.h>

#include "common.hpp"

using namespace richardson;

TEST(Model, WorkedExampleIsValid) {
  auto m = make_model({0.0, 1.0}, 1, 0.5);
  EXPECT_TRUE(validate(m).ok());
  EXPECT_EQ(m.capacity(), 2);
}

TEST(Model, DuplicateLevel) {
  auto r = validate(make_model({0.0, 0.0}, 1, 0.5));
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.str().find("duplicate level"), std::string::npos);
}

TEST(Model, TooManyPairs) {
  auto r = validate(make_model({0.0, 1.0}, 3, 0.5));
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.str().find("too many pairs"), std::string::npos);
}

TEST(Model, NonPositiveCoupling) {
  EXPECT_FALSE(validate(make_model({0.0, 1.0}, 1, 0.0)).ok());
  EXPECT_FALSE(validate(make_model({0.0, 1.0}, 1, -1.0)).ok());
}

TEST(Model, NearDuplicateRejected) {
  auto r = validate(make_model({1.0, 1.0 + 1e-14}, 1, 0.5));
  EXPECT_FALSE(r.ok());
}

TEST(Model, TrigStripWidth) {
  EXPECT_TRUE(validate(make_model({0.0, 1.0, 3.0}, 1, 0.5, Kind::trigonometric)).ok());
  EXPECT_FALSE(validate(make_model({0.0, 1.0, 3.5}, 1, 0.5, Kind::trigonometric)).ok());
}

TEST(Model, RequireValidThrows) { EXPECT_THROW(require_valid(make_model({0.0, 0.0}, 1, 0.5)), config_error); }

TEST(Model, MergeDegenerate) {
  auto a = merge_degenerate({0, 1, 1, 2});
  EXPECT_EQ(a.levels, (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(a.degeneracies, (std::vector<int>{1, 2, 1}));
  auto b = merge_degenerate({5});
  EXPECT_EQ(b.levels, (std::vector<double>{5}));
  EXPECT_EQ(b.degeneracies, (std::vector<int>{1}));
  auto c = merge_degenerate({0, 0, 0});
  EXPECT_EQ(c.degeneracies, (std::vector<int>{3}));
}

TEST(ModelProperty, MergedListsValidate) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(-3, 3), len(1, 9);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = 0.5 * pick(rng);
    auto ls = merge_degenerate(v);
    int total = 0;
    for (int d : ls.degeneracies) total += d;
    EXPECT_EQ(total, int(v.size()));
    PairingModel m{ls.levels, ls.degeneracies, int(v.size()) / 2, 0.3, Kind::rational};
    EXPECT_TRUE(validate(m).ok()) << validate(m).str();
  }
}

TEST(ModelProperty, ConfigRoundTrip) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto m = testutil::random_model(rng, 1 + rep % 8, rep % 3);
    m.levels[0] = 0.1 + 1e-3 * rep / 3.0;  // awkward decimal
    std::sort(m.levels.begin(), m.levels.end());
    if (rep % 2) m.kind = Kind::trigonometric;
    EXPECT_EQ(model_from_text(to_config_text(m)), m);
  }
}

TEST(Model, JsonDefaultsAndSorting) {
  auto m = model_from_text(R"({"levels":[1.0,0.0],"degeneracies":[2,1],"pairs":1,"coupling":0.5})");
  EXPECT_EQ(m.levels, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(m.degeneracies, (std::vector<int>{1, 2}));
  EXPECT_EQ(m.kind, Kind::rational);
  auto d = model_from_text(R"({"levels":[0.0,1.0],"pairs":1,"coupling":0.5,"kind":"trigonometric"})");
  EXPECT_EQ(d.degeneracies, (std::vector<int>{1, 1}));
  EXPECT_EQ(d.kind, Kind::trigonometric);
}

TEST(Model, MalformedJson) {
  EXPECT_THROW(model_from_text("{"), config_error);
  EXPECT_THROW(model_from_text(R"({"levels":[0],"pairs":1})"), config_error);
  EXPECT_THROW(model_from_text(R"({"levels":[0],"pairs":1,"coupling":1,"kind":"elliptic"})"), config_error);
}
