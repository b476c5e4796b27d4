#include "seqtc/knowledge.hpp"

#include <gtest/gtest.h>

namespace seqtc::knowledge {
namespace {

TEST(FadellNeuwirth, ClosedFormValues) {
  EXPECT_EQ(value_fadell_neuwirth(3, 2, 1, 2).exact, 3);
  EXPECT_EQ(value_fadell_neuwirth(2, 2, 1, 2).exact, 2);
  EXPECT_EQ(value_fadell_neuwirth(2, 3, 2, 3).exact, 7);
}

TEST(FadellNeuwirth, CertificateBacksTheLowerBound) {
  const auto rec = value_fadell_neuwirth(2, 3, 2, 3);
  EXPECT_EQ(rec.lower, rec.exact);
  EXPECT_EQ(rec.extra.at("certificate").at("bound"), 7);
  bool certified = false;
  for (const auto& p : rec.provenance)
    if (p.kind == ProvenanceKind::certificate && p.quantity == "lower") certified = true;
  EXPECT_TRUE(certified);
  EXPECT_TRUE(rec.consistent());
}

TEST(FadellNeuwirth, OutsideDeskScaleIsQuoted) {
  const auto rec = value_fadell_neuwirth(3, 5, 4, 6);
  EXPECT_EQ(rec.exact, 6 * 4 + 5 - 1);
  EXPECT_FALSE(rec.extra.contains("certificate"));
  for (const auto& p : rec.provenance) EXPECT_EQ(p.kind, ProvenanceKind::paper_constant);
}

TEST(FadellNeuwirth, RejectsOutOfRange) {
  EXPECT_THROW(value_fadell_neuwirth(1, 2, 1, 2), ArgumentError);
  EXPECT_THROW(value_fadell_neuwirth(2, 1, 1, 2), ArgumentError);
  EXPECT_THROW(value_fadell_neuwirth(2, 2, 0, 2), ArgumentError);
  EXPECT_THROW(value_fadell_neuwirth(2, 2, 1, 1), ArgumentError);
}

TEST(So3, Examples) {
  const auto r2 = value_so3_bundle(2);
  EXPECT_EQ(r2.upper, 1);
  EXPECT_EQ(r2.lower, 1);
  EXPECT_EQ(r2.exact, 1);
  EXPECT_EQ(r2.extra["tc_comparison"], 3);
  EXPECT_EQ(value_so3_bundle(3).upper, 3);
  EXPECT_EQ(value_so3_bundle(3).extra["tc_comparison"], 6);
  EXPECT_EQ(value_so3_bundle(5).upper, 11);
  EXPECT_EQ(value_so3_bundle(5).extra["tc_comparison"], 12);
  EXPECT_FALSE(value_so3_bundle(5).exact.has_value());
  EXPECT_THROW(value_so3_bundle(1), ArgumentError);
}

TEST(So3, StrictlyBelowTcForAllR) {
  for (int r = 2; r <= 200; ++r) {
    const auto rec = value_so3_bundle(r);
    EXPECT_TRUE(rec.consistent()) << r;
    EXPECT_LT(*rec.upper, 3LL * (r - 1)) << r;
  }
}

TEST(Spheres, Antipodal) {
  EXPECT_EQ(value_product_spheres({2, 4}, 2, SphereAction::antipodal).exact, 4);
  EXPECT_EQ(value_product_spheres({1, 1, 1}, 3, SphereAction::antipodal).exact, 6);
}

TEST(Spheres, GeneralInvolution) {
  const auto even = value_product_spheres({2, 2}, 2, SphereAction::general, {2, 2});
  EXPECT_EQ(even.lower, 4);
  EXPECT_EQ(even.upper, 4);
  EXPECT_EQ(even.exact, 4);
  const auto mixed = value_product_spheres({1, 2}, 3, SphereAction::general, {2, 3});
  EXPECT_EQ(mixed.lower, 5);
  EXPECT_EQ(mixed.upper, 6);
  EXPECT_FALSE(mixed.exact.has_value());
  EXPECT_THROW(value_product_spheres({2, 2}, 2, SphereAction::general, {1, 2}), ArgumentError);
  EXPECT_THROW(value_product_spheres({2, 2}, 2, SphereAction::general, {2, 4}), ArgumentError);
  EXPECT_THROW(value_product_spheres({2, 2}, 2, SphereAction::general, {2}), ArgumentError);
}

TEST(Associate, Formula) {
  EXPECT_EQ(value_associate_upper(1), 3);
  EXPECT_EQ(value_associate_upper(0), 0);
  EXPECT_EQ(value_associate_upper(2), 8);
  EXPECT_THROW(value_associate_upper(-1), ArgumentError);
}

TEST(Threshold, ExactRationals) {
  EXPECT_EQ(value_son_threshold(2), Rational(3));
  EXPECT_EQ(value_son_threshold(3), Rational(15, 2));
  EXPECT_EQ(value_son_threshold(4), Rational(21));
  for (int r = 2; r <= 20; ++r) EXPECT_GE(value_son_threshold(r), Rational(3));
}

TEST(Hopf, ExactRMinusOne) {
  for (int r = 2; r <= 6; ++r) EXPECT_EQ(value_hopf(r).exact, r - 1);
}

TEST(Records, EveryRecordIsTagged) {
  for (const auto& rec : {value_so3_bundle(4), value_hopf(3), associate_record(2), threshold_record(3),
                          value_product_spheres({3}, 2, SphereAction::antipodal)}) {
    EXPECT_TRUE(rec.consistent()) << rec.family;
    EXPECT_FALSE(rec.citations().empty());
    const auto j = to_json(rec);
    EXPECT_TRUE(j.contains("provenance"));
  }
}

}  // namespace
}  // namespace seqtc::knowledge
