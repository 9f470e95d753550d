#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "intentsim/nn/losses.hpp"
#include "intentsim/predict/predictor.hpp"
#include "oracles/gradcheck.hpp"

namespace nn = intentsim::nn;
namespace predict = intentsim::predict;
using intentsim::grid::ScalarMap;
using predict::IntentionSource;
using predict::Predictor;
using predict::PredictorSpec;

namespace {

intentsim::percept::StateTensor random_state(int channels, int size, std::mt19937& rng) {
  intentsim::percept::StateTensor s;
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int c = 0; c < channels; ++c) {
    ScalarMap m(size, size);
    for (float& v : m.values()) v = u(rng);
    s.channels.push_back(std::move(m));
  }
  return s;
}

}  // namespace

TEST(IntentionSourceSchedule, SwapsAtNineTenths) {
  const int64_t total = 20000;
  EXPECT_EQ(predict::intention_source(0, total, true), IntentionSource::Communicated);
  EXPECT_EQ(predict::intention_source(total * 9 / 10 - 1, total, true),
            IntentionSource::Communicated);
  EXPECT_EQ(predict::intention_source(total * 9 / 10, total, true), IntentionSource::Predicted);
  EXPECT_EQ(predict::intention_source(total * 95 / 100, total, true),
            IntentionSource::Predicted);
  // Execution always runs on predictions.
  EXPECT_EQ(predict::intention_source(0, total, false), IntentionSource::Predicted);
}

TEST(PredictIntention, UntrainedOutputsStayInOpenUnitInterval) {
  PredictorSpec spec = PredictorSpec::make(intentsim::env::Task::SearchAndRescue, false,
                                           nn::Scale::Desk);
  Predictor pred(spec);
  pred.init(3);
  std::mt19937 rng(5);
  auto state = random_state(4, 9, rng);  // 3 base channels + intention slot
  ScalarMap map = pred.predict(state, nullptr);
  EXPECT_EQ(map.width(), 9);
  EXPECT_EQ(map.height(), 9);
  for (float v : map.values()) {
    EXPECT_GT(v, 0.0f);
    EXPECT_LT(v, 1.0f);
  }
}

TEST(PredictIntention, HistoryVariantRequiresTheChannel) {
  PredictorSpec spec =
      PredictorSpec::make(intentsim::env::Task::Foraging, true, nn::Scale::Desk);
  EXPECT_EQ(spec.fcn.in_channels, 5);  // 4 base + history
  Predictor pred(spec);
  pred.init(3);
  std::mt19937 rng(5);
  auto state = random_state(5, 9, rng);
  EXPECT_THROW(pred.predict(state, nullptr), std::invalid_argument);
  ScalarMap history(9, 9, 0.25f);
  ScalarMap map = pred.predict(state, &history);
  EXPECT_EQ(map.width(), 9);
}

TEST(PredictorLoss, AnalyticValues) {
  // All-half predictions against a binary target cost ln 2 per cell.
  ScalarMap half(6, 6, 0.5f);
  ScalarMap target(6, 6, 0.0f);
  for (int i = 0; i < 6; ++i) target.set(i, i, 1.0f);
  EXPECT_NEAR(predict::predictor_loss(half, target), std::log(2.0), 1e-6);

  // Matching near-zero maps cost ~0.
  ScalarMap tiny(4, 4, 1e-9f);
  ScalarMap zeros(4, 4, 0.0f);
  EXPECT_NEAR(predict::predictor_loss(tiny, zeros), 0.0, 1e-6);
  EXPECT_THROW(predict::predictor_loss(half, zeros), std::invalid_argument);
}

TEST(PredictorLoss, LogitGradientMatchesFiniteDifferences) {
  std::mt19937 rng(31);
  nn::Tensor<double> logits(2, 1, 4, 4), target(2, 1, 4, 4);
  std::uniform_real_distribution<double> ul(-2.0, 2.0), ut(0.0, 1.0);
  for (double& v : logits.data) v = ul(rng);
  for (double& v : target.data) v = ut(rng);

  nn::Tensor<double> grad;
  nn::bce_with_logits_mean(logits, target, &grad);
  auto loss = [&]() { return double(nn::bce_with_logits_mean<double>(logits, target, nullptr)); };
  std::vector<size_t> slots(logits.data.size());
  std::iota(slots.begin(), slots.end(), size_t(0));
  auto res = intentsim::oracle::gradcheck(logits.data, grad.data, slots, loss);
  EXPECT_LT(res.max_rel_error, 1e-6);

  // And through a conv head in double precision.
  nn::Conv2d<double> head(2, 1, 1, 1, true);
  head.init(rng);
  nn::Tensor<double> x(2, 2, 4, 4);
  for (double& v : x.data) v = ul(rng);
  auto head_loss = [&]() {
    nn::Tensor<double> z = head.forward(x);
    return double(nn::bce_with_logits_mean<double>(z, target, nullptr));
  };
  head.zero_grad();
  nn::Tensor<double> z = head.forward(x);
  nn::Tensor<double> gz;
  nn::bce_with_logits_mean(z, target, &gz);
  head.backward(gz);
  std::vector<size_t> wslots(head.weight.size());
  std::iota(wslots.begin(), wslots.end(), size_t(0));
  res = intentsim::oracle::gradcheck(head.weight, head.wgrad, wslots, head_loss);
  EXPECT_LT(res.max_rel_error, 1e-4);
}

TEST(PredictorTraining, OverfitsAllZeroTargets) {
  // Frozen scripted dataset whose true intention map is all zero: after a
  // short training run the mean prediction must drop below 0.1.
  PredictorSpec spec = PredictorSpec::make(intentsim::env::Task::SearchAndRescue, false,
                                           nn::Scale::Desk);
  Predictor pred(spec);
  pred.init(9);
  std::mt19937 rng(12);
  const int batch = 8, size = 9;
  nn::Tensor<float> inputs(batch, spec.fcn.in_channels, size, size);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (float& v : inputs.data) v = u(rng);
  nn::Tensor<float> targets(batch, 1, size, size, 0.0f);

  nn::SgdHyper<float> hyper{0.01f, 0.9f, 0.0001f, 100.0f};
  float first = 0.0f, last = 0.0f;
  for (int step = 0; step < 60; ++step) {
    float loss = pred.train_batch(inputs, targets, hyper);
    if (step == 0) first = loss;
    last = loss;
  }
  EXPECT_LT(last, first);

  std::mt19937 rng2(12);
  auto state = random_state(4, size, rng2);
  ScalarMap out = pred.predict(state, nullptr);
  double mean = 0.0;
  for (float v : out.values()) mean += v;
  mean /= out.values().size();
  EXPECT_LT(mean, 0.1);
}
