#include <algorithm>
#include <cmath>
#include <random>

#include "bfp/error.hpp"
#include "bfp/eval.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bfp;

TEST_CASE("2017 accuracy table") {
  const auto cm = ConfusionMatrix::from_report_cells(12, 3, 2, 10);
  CHECK(cm.total() == 27);
  const auto m = class_metrics(cm, PositiveClass::NonBankrupt);
  CHECK(std::abs(m.accuracy - 22.0 / 27.0) < 1e-15);
  CHECK(std::abs(*m.precision - 0.769) < 5e-4);
  CHECK(std::abs(*m.recall - 0.833) < 5e-4);
  const auto b = class_metrics(cm, PositiveClass::Bankrupt);
  CHECK(*b.precision == doctest::Approx(12.0 / 14.0));
  CHECK(*b.recall == doctest::Approx(12.0 / 15.0));
}

TEST_CASE("2018 accuracy table") {
  const auto m = class_metrics(ConfusionMatrix::from_report_cells(12, 3, 1, 11), PositiveClass::NonBankrupt);
  CHECK(std::abs(m.accuracy - 0.8518) < 1e-3);
  CHECK(std::abs(*m.precision - 0.7857) < 1e-3);
  CHECK(std::abs(*m.recall - 0.9167) < 1e-3);
}

TEST_CASE("hand tallied confusion matrix") {
  const std::vector<int> actual{1, 1, 1, 0, 0, 0};
  const std::vector<int> pred{1, 0, 1, 0, 1, 0};
  const auto cm = confusion_matrix(actual, pred);
  CHECK(cm.at(1, 1) == 2);
  CHECK(cm.at(1, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(0, 0) == 2);
  CHECK(cm.actual_total(1) == 3);
  CHECK(cm.predicted_total(1) == 3);
  CHECK(cm.trace() == 4);
  CHECK(cm == ConfusionMatrix::from_report_cells(2, 1, 1, 2));
  const std::vector<int> short_pred{1};
  CHECK_THROWS_AS(confusion_matrix(actual, short_pred), Error);
}

TEST_CASE("undefined precision and recall") {
  const auto cm = ConfusionMatrix::from_report_cells(0, 5, 0, 5);
  const auto b = class_metrics(cm, PositiveClass::Bankrupt);
  CHECK_FALSE(b.precision.has_value());
  CHECK(*b.recall == 0.0);
  const auto n = class_metrics(ConfusionMatrix::from_report_cells(3, 0, 0, 0), PositiveClass::NonBankrupt);
  CHECK_FALSE(n.recall.has_value());
  CHECK(positive_class_from_string("non-bankrupt") == PositiveClass::NonBankrupt);
  CHECK(positive_class_from_string("bankrupt") == PositiveClass::Bankrupt);
  CHECK_FALSE(positive_class_from_string("maybe").has_value());
}

TEST_CASE("auc equals the mann-whitney statistic") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u;
  for (std::size_t n : {2, 5, 17, 60, 121, 200}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> s(n);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2 == 0 ? 1 : (u(rng) < 0.5);
        // coarse rounding makes ties common
        s[i] = rep % 2 ? std::round(u(rng) * 10) / 10 : u(rng);
      }
      for (auto pc : {PositiveClass::Bankrupt, PositiveClass::NonBankrupt}) {
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < n; ++i) {
          const double score = pc == PositiveClass::Bankrupt ? s[i] : 1 - s[i];
          (y[i] == positive_label(pc) ? pos : neg).push_back(score);
        }
        if (pos.empty() || neg.empty()) continue;
        const auto roc = roc_curve(s, y, pc);
        CHECK(std::abs(roc.auc - testing::mann_whitney(pos, neg)) < 1e-12);
      }
    }
  }
}

TEST_CASE("perfect, inverted and tied rankings") {
  const std::vector<int> y{1, 1, 0, 0};
  const std::vector<double> good{0.9, 0.8, 0.2, 0.1};
  const std::vector<double> bad{0.1, 0.2, 0.8, 0.9};
  const std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
  CHECK(roc_curve(good, y, PositiveClass::Bankrupt).auc == 1.0);
  CHECK(roc_curve(bad, y, PositiveClass::Bankrupt).auc == 0.0);
  CHECK(roc_curve(good, y, PositiveClass::NonBankrupt).auc == 1.0);
  const auto tied = roc_curve(flat, y, PositiveClass::Bankrupt);
  CHECK(tied.auc == 0.5);
  CHECK(tied.points.size() == 2);
}

TEST_CASE("roc curve shape") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u;
  std::vector<double> s(50);
  std::vector<int> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = i < 25;
    s[i] = u(rng);
  }
  const auto roc = roc_curve(s, y, PositiveClass::Bankrupt);
  CHECK(std::isinf(roc.points.front().threshold));
  CHECK(roc.points.front().fpr == 0.0);
  CHECK(roc.points.front().tpr == 0.0);
  CHECK(roc.points.back().fpr == 1.0);
  CHECK(roc.points.back().tpr == 1.0);
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].threshold < roc.points[i - 1].threshold);
    CHECK(roc.points[i].fpr >= roc.points[i - 1].fpr);
    CHECK(roc.points[i].tpr >= roc.points[i - 1].tpr);
  }

  // a strictly increasing transform of the scores keeps the curve
  std::vector<double> t(50);
  for (std::size_t i = 0; i < 50; ++i) t[i] = std::pow(s[i], 3);
  const auto roc2 = roc_curve(t, y, PositiveClass::Bankrupt);
  REQUIRE(roc2.points.size() == roc.points.size());
  CHECK(roc2.auc == roc.auc);
  for (std::size_t i = 0; i < roc.points.size(); ++i) {
    CHECK(roc2.points[i].fpr == roc.points[i].fpr);
    CHECK(roc2.points[i].tpr == roc.points[i].tpr);
  }

  // the 0.5 cut of the bankrupt curve reproduces the confusion matrix
  std::vector<int> pred(50);
  for (std::size_t i = 0; i < 50; ++i) pred[i] = s[i] > 0.5;
  const auto cm = confusion_matrix(y, pred);
  const auto it = std::find_if(roc.points.rbegin(), roc.points.rend(), [](auto& p) { return p.threshold > 0.5; });
  REQUIRE(it != roc.points.rend());
  CHECK(it->tpr == static_cast<double>(cm.at(1, 1)) / 25.0);
  CHECK(it->fpr == static_cast<double>(cm.at(0, 1)) / 25.0);
}

TEST_CASE("roc input errors") {
  const std::vector<double> s{0.2, 0.7};
  const std::vector<int> one_class{1, 1};
  CHECK_THROWS_AS(roc_curve(s, one_class, PositiveClass::Bankrupt), Error);
  const std::vector<double> bad{0.2, 1.7};
  const std::vector<int> y{1, 0};
  CHECK_THROWS_AS(roc_curve(bad, y, PositiveClass::Bankrupt), Error);
}
