#include "tog/tensor.hpp"

#include <limits>

#include <gtest/gtest.h>

#include "tog/errors.hpp"

namespace {

using tog::Tensor;

TEST(Tensor, DefaultIsEmptyRankZero) {
  Tensor t;
  EXPECT_EQ(t.rank(), 0u);
  EXPECT_EQ(t.size(), 0u);
}

TEST(Tensor, ZerosAllocatesAndZeroFills) {
  Tensor t({2, 3});
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_EQ(t.size(), 6u);
  for (double v : t) EXPECT_EQ(v, 0.0);
}

TEST(Tensor, FullAndScalar) {
  Tensor t = Tensor::full({4}, 2.5);
  for (double v : t) EXPECT_EQ(v, 2.5);
  Tensor s = Tensor::scalar(-1.0);
  EXPECT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], -1.0);
}

TEST(Tensor, RowAndFromRows) {
  Tensor r = Tensor::row({1.0, 2.0, 3.0});
  EXPECT_EQ(r.rank(), 1u);
  EXPECT_EQ(r.dim(0), 3u);
  Tensor m = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_EQ(m.at(1, 0), 3.0);
  EXPECT_EQ(m.at(1, 1), 4.0);
}

TEST(Tensor, FromRowsRejectsRaggedInput) {
  EXPECT_THROW(Tensor::from_rows({{1.0, 2.0}, {3.0}}), tog::ShapeMismatch);
}

TEST(Tensor, RowColViewTreatsRankOneAsSingleRow) {
  Tensor v = Tensor::row({1.0, 2.0, 3.0});
  EXPECT_EQ(v.rows(), 1u);
  EXPECT_EQ(v.cols(), 3u);
  EXPECT_EQ(v.at(0, 2), 3.0);
  Tensor s = Tensor::scalar(7.0);
  EXPECT_EQ(s.rows(), 1u);
  EXPECT_EQ(s.cols(), 1u);
}

TEST(Tensor, AtUsesRowMajorLayout) {
  Tensor m({2, 3});
  m.at(0, 1) = 5.0;
  m.at(1, 2) = 9.0;
  EXPECT_EQ(m[1], 5.0);
  EXPECT_EQ(m[5], 9.0);
}

TEST(Tensor, EigenViewSharesStorage) {
  Tensor m = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  m.mat()(0, 0) = 10.0;
  EXPECT_EQ(m.at(0, 0), 10.0);
  m.vec()(3) = -4.0;
  EXPECT_EQ(m.at(1, 1), -4.0);
}

TEST(Tensor, MatmulThroughEigenMatchesHandComputation) {
  Tensor a = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  Tensor b = Tensor::from_rows({{5.0, 6.0}, {7.0, 8.0}});
  Tensor c({2, 2});
  c.mat() = a.mat() * b.mat();
  EXPECT_EQ(c.at(0, 0), 19.0);
  EXPECT_EQ(c.at(0, 1), 22.0);
  EXPECT_EQ(c.at(1, 0), 43.0);
  EXPECT_EQ(c.at(1, 1), 50.0);
}

TEST(Tensor, ReshapedKeepsDataChangesShape) {
  Tensor m = Tensor::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
  Tensor r = m.reshaped({3, 2});
  EXPECT_EQ(r.dim(0), 3u);
  EXPECT_EQ(r.dim(1), 2u);
  EXPECT_EQ(r.at(2, 1), 6.0);
  EXPECT_THROW(m.reshaped({4, 2}), tog::ShapeMismatch);
}

TEST(Tensor, FillOverwritesEverything) {
  Tensor m({2, 2});
  m.fill(3.5);
  for (double v : m) EXPECT_EQ(v, 3.5);
}

TEST(Tensor, AllFiniteDetectsNanAndInf) {
  Tensor m({2});
  EXPECT_TRUE(m.all_finite());
  m[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(m.all_finite());
  m[0] = 0.0;
  m[1] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(m.all_finite());
}

TEST(Tensor, SameShapeComparesShapeOnly) {
  Tensor a({2, 3});
  Tensor b({2, 3});
  Tensor c({3, 2});
  EXPECT_TRUE(a.same_shape(b));
  EXPECT_FALSE(a.same_shape(c));
}

TEST(Tensor, ShapeStringIsReadable) {
  Tensor m({2, 3});
  EXPECT_EQ(tog::shape_string(m), "(2,3)");
}

}  // namespace
