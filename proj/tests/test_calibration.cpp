#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "regime_fx/calibration.hpp"
#include "regime_fx/errors.hpp"
#include "regime_fx/linalg.hpp"

using namespace regime_fx;

namespace {

struct Fixture {
  CandleSeries series;
  CalibrationConfig cfg;
  std::vector<TrendState> labels;
  std::array<std::array<std::int64_t, 3>, 3> counts{};
};

Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.series = read_candle_csv(std::string(FIXTURE_DIR) + "/" + name + ".csv");
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name + "_expected.json");
  const auto j = nlohmann::json::parse(in);
  const auto& c = j["config"];
  f.cfg.candles_back_up = c["candles_back_up"];
  f.cfg.candles_back_down = c["candles_back_down"];
  f.cfg.delta_back_up = c["delta_back_up"];
  f.cfg.delta_back_down = c["delta_back_down"];
  f.cfg.candles_up = c["candles_up"];
  f.cfg.candles_down = c["candles_down"];
  f.cfg.delta_up = c["delta_up"];
  f.cfg.delta_down = c["delta_down"];
  for (const auto& l : j["labels"]) {
    const std::string s = l;
    f.labels.push_back(s == "up" ? TrendState::up
                                 : s == "down" ? TrendState::down : TrendState::sideway);
  }
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) f.counts[r][k] = j["counts"][r][k];
  return f;
}

CandleSeries linear(std::size_t n, double step_pips) {
  CandleSeries s;
  for (std::size_t i = 0; i < n; ++i) s.opens.push_back(1.1 + step_pips * 1e-4 * i);
  return s;
}

}  // namespace

TEST(ClassifyStates, ConstantSeriesIsSideway) {
  CandleSeries s{std::vector<double>(80, 1.2345)};
  for (auto l : classify_states(s, CalibrationConfig{})) EXPECT_EQ(l, TrendState::sideway);
}

TEST(ClassifyStates, RisingSeriesIsUpAfterWarmUp) {
  const auto labels = classify_states(linear(100, 2.0), CalibrationConfig{});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(labels[i], i < 30 ? TrendState::sideway : TrendState::up) << i;
  }
}

TEST(ClassifyStates, HandTracedZigzag) {
  const auto f = load_fixture("zigzag20");
  EXPECT_EQ(classify_states(f.series, f.cfg), f.labels);
  // Index 16 passes both lookback tests; down takes precedence.
  EXPECT_EQ(f.labels[16], TrendState::down);
}

TEST(ClassifyStates, ShiftEquivariance) {
  const auto f = load_fixture("planted200");
  const auto base = classify_states(f.series, f.cfg);
  const std::size_t warm = static_cast<std::size_t>(f.cfg.max_back());
  for (std::size_t k : {1u, 7u, 40u}) {
    CandleSeries shifted = f.series;
    shifted.opens.insert(shifted.opens.begin(), k, f.series.opens.front());
    const auto labels = classify_states(shifted, f.cfg);
    for (std::size_t i = warm; i < base.size(); ++i) EXPECT_EQ(labels[i + k], base[i]) << i;
  }
}

TEST(ClassifyStates, VerbatimModeIgnoresBackwardThresholds) {
  const auto f = load_fixture("planted200");
  CalibrationConfig a = f.cfg, b = f.cfg;
  a.verbatim_appendix = b.verbatim_appendix = true;
  b.delta_back_up = 1000.0;
  b.delta_back_down = 0.0;
  EXPECT_EQ(classify_states(f.series, a), classify_states(f.series, b));
  CalibrationConfig c = f.cfg;
  c.delta_back_up = c.delta_up;
  c.delta_back_down = c.delta_down;
  EXPECT_EQ(classify_states(f.series, a), classify_states(f.series, c));
}

TEST(ClassifyStates, TooShortSeries) {
  CandleSeries s{std::vector<double>(30, 1.0)};
  EXPECT_THROW(classify_states(s, CalibrationConfig{}), InputError);
  CalibrationConfig bad;
  bad.candles_up = 0;
  EXPECT_THROW(classify_states(linear(100, 1.0), bad), InputError);
  bad = CalibrationConfig{};
  bad.delta_down = -1.0;
  EXPECT_THROW(classify_states(linear(100, 1.0), bad), InputError);
}

TEST(EstimateTransitionMatrix, HandTracedZigzag) {
  const auto f = load_fixture("zigzag20");
  const auto est = estimate_transition_matrix(f.series, f.cfg);
  EXPECT_EQ(est.counts, f.counts);
  Eigen::Matrix3d expected;
  expected << 0.4, 0.0, 0.6, 0.6, 0.0, 0.4, 0.375, 0.375, 0.25;
  EXPECT_LE((est.matrix - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EstimateTransitionMatrix, PlantedFixtureMatchesTrace) {
  const auto f = load_fixture("planted200");
  const auto est = estimate_transition_matrix(f.series, f.cfg);
  EXPECT_EQ(est.counts, f.counts);
  for (int r = 0; r < 3; ++r) {
    const double total = double(f.counts[r][0] + f.counts[r][1] + f.counts[r][2]);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(est.matrix(r, c), f.counts[r][c] / total);
    EXPECT_NEAR(est.matrix.row(r).sum(), 1.0, 1e-12);
  }
  std::int64_t n = 0;
  for (const auto& r : est.counts)
    for (auto c : r) n += c;
  EXPECT_EQ(n, 200 - f.cfg.max_forward());
}

TEST(EstimateTransitionMatrix, UpTrendAndDegenerateRows) {
  // Rising series: only the warm-up candles are sideway and every successor
  // is up, so the down row is empty.
  EXPECT_THROW(estimate_transition_matrix(linear(100, 2.0), CalibrationConfig{}),
               DegenerateDataError);
  CandleSeries s = linear(100, 2.0);
  // A few falling bars to populate the down row.
  for (int i = 0; i < 40; ++i) s.opens.push_back(s.opens.back() - 3e-4);
  for (int i = 0; i < 60; ++i) s.opens.push_back(s.opens.back() + 3e-4);
  const auto est = estimate_transition_matrix(s, CalibrationConfig{});
  EXPECT_GT(est.counts[0][0], 0);
  EXPECT_GT(est.counts[1][1] + est.counts[1][0] + est.counts[1][2], 0);
  EXPECT_NEAR(est.matrix.row(0).sum(), 1.0, 1e-12);
  EXPECT_THROW(estimate_transition_matrix(linear(60, 2.0), CalibrationConfig{}), InputError);
}

TEST(EmbedGenerator, DirectFormula) {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  const auto m = embed_generator(p, 1.0);
  Matrix expected(2, 2);
  expected << -0.1, 0.1, 0.2, -0.2;
  EXPECT_LE((m.generator() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(m.initial_distribution()(0), 2.0 / 3.0, 1e-14);

  const auto id = embed_generator(Matrix::Identity(3, 3), 1.0 / 252);
  EXPECT_EQ(id.generator(), Matrix::Zero(3, 3));
}

TEST(EmbedGenerator, AppendixMatrixDailyCandles) {
  Matrix p(3, 3);
  p << 0.4408, 0.4527, 0.1065, 0.4818, 0.4149, 0.1033, 0.4820, 0.4119, 0.1061;
  const double dt = 1.0 / 252.0;
  const auto m = embed_generator(p, dt);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) { EXPECT_NEAR(m.generator()(i, j), 252.0 * p(i, j), 1e-10); }
  EXPECT_LE((m.initial_distribution() - oracle::power_iteration(p)).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix step = expm(Matrix(m.generator() * dt));
  EXPECT_LE((step.rowwise().sum() - Vector::Ones(3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(step.minCoeff(), 0.0);
}

TEST(EmbedGenerator, RejectsInvalidInput) {
  Matrix p(2, 2);
  p << 0.9, 0.2, 0.2, 0.8;
  EXPECT_THROW(embed_generator(p, 1.0), InputError);
  p << 1.1, -0.1, 0.2, 0.8;
  EXPECT_THROW(embed_generator(p, 1.0), InputError);
  p << 0.5, 0.5, 0.2, 0.8;
  EXPECT_THROW(embed_generator(p, 0.0), InputError);
  EXPECT_THROW(embed_generator(p, 1e-7), InputError);  // 5e6 exits per year
  EXPECT_NO_THROW(embed_generator(p, 1e-7, 1e7));
}

TEST(ParseCandleCsv, HeaderBlankLinesAndErrors) {
  std::istringstream ok("open\n1.1\n\n 1.2 \r\n1.3\n");
  const auto s = parse_candle_csv(ok, 0.5);
  EXPECT_EQ(s.opens, (std::vector<double>{1.1, 1.2, 1.3}));
  EXPECT_EQ(s.bar_interval, 0.5);

  std::istringstream bad("open\n1.1\nabc\n");
  try {
    parse_candle_csv(bad);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream negative("1.0\n-2\n");
  EXPECT_THROW(parse_candle_csv(negative), InputError);
  std::istringstream empty("");
  EXPECT_THROW(parse_candle_csv(empty), InputError);
  std::istringstream header_only("open\n");
  EXPECT_THROW(parse_candle_csv(header_only), InputError);
  EXPECT_THROW(read_candle_csv("/nonexistent/file.csv"), InputError);
}
