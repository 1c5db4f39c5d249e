#include <doctest.h>

#include <random>

#include "ltcf/short_term.hpp"
#include "ltcf/uncertainty.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace ltcf;

namespace {

ShortTermParams TestParams() {
  ShortTermParams params;
  params.features.use_colornames = false;
  return params;
}

double CellsToPixels(const ShortTermTracker &tracker, double scale) {
  return tracker.geometry().cell_size * scale / tracker.geometry().rescale;
}

// Whole-frame content shift by an integer offset (camera pan), replicate
// padding at the exposed border.
cv::Mat ShiftFrame(const cv::Mat &img, int dx, int dy) {
  cv::Mat padded;
  int pad = std::max(std::abs(dx), std::abs(dy));
  cv::copyMakeBorder(img, padded, pad, pad, pad, pad, cv::BORDER_REPLICATE);
  return padded(cv::Rect(pad - dx, pad - dy, img.cols, img.rows)).clone();
}

}  // namespace

TEST_CASE("template geometry: even grid, exact pixel cover, capped template") {
  TemplateGeometry g = MakeTemplateGeometry({48, 36}, 4, 2.0, 100);
  CHECK(g.rescale == 1.0);
  CHECK(g.grid.width % 2 == 0);
  CHECK(g.grid.height % 2 == 0);
  CHECK(g.region_px.width == g.grid.width * 4);
  CHECK(g.region_px.height == g.grid.height * 4);
  CHECK(g.grid.width >= 36 / 4 * 3);  // covers the padded region

  TemplateGeometry big = MakeTemplateGeometry({400, 200}, 4, 2.0, 100);
  CHECK(big.rescale == doctest::Approx(0.25));
  CHECK(big.target_px.width == doctest::Approx(100.0));
}

TEST_CASE("short term: self-localization on the training frame is sub-cell") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());

  TargetState state{{160, 120}, {48, 36}, 1.0};
  auto loc = tracker.Localize(scenes::FrameAt(seq, 0), state);
  double moved = cv::norm(loc.state.center - state.center);
  CHECK(moved < 0.5 * CellsToPixels(tracker, 1.0));
}

TEST_CASE("short term: +8 px content translation is recovered within 1 px") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());

  TargetState state{{160, 120}, {48, 36}, 1.0};
  ImageFrame shifted{ShiftFrame(seq.frames[0], 8, 0), 1};
  auto loc = tracker.Localize(shifted, state);
  CHECK(std::abs(loc.state.center.x - 168.0) <= 1.0);
  CHECK(std::abs(loc.state.center.y - 120.0) <= 1.0);
}

TEST_CASE("short term: localization is translation equivariant over random shifts") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1, 13));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};

  std::mt19937 rng(55);
  std::uniform_int_distribution<int> dx_dist(-24, 24), dy_dist(-18, 18);
  for (int trial = 0; trial < 20; ++trial) {
    int dx = dx_dist(rng), dy = dy_dist(rng);
    ImageFrame shifted{ShiftFrame(seq.frames[0], dx, dy), trial + 1};
    auto loc = tracker.Localize(shifted, state);
    CHECK(std::abs(loc.state.center.x - (160.0 + dx)) <= 1.0 + 1e-9);
    CHECK(std::abs(loc.state.center.y - (120.0 + dy)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("short term: a target moving over a static background stays locked to cell accuracy") {
  SyntheticScript script = scenes::StaticScript(2);
  script.trajectory = {{0, 160.0, 120.0, 1.0}, {1, 174.0, 110.0, 1.0}};
  RenderedSequence seq = GenerateSynthetic(script);

  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};
  auto loc = tracker.Localize(scenes::FrameAt(seq, 1), state);
  double cell_px = CellsToPixels(tracker, 1.0);
  CHECK(std::abs(loc.state.center.x - 174.0) <= cell_px);
  CHECK(std::abs(loc.state.center.y - 110.0) <= cell_px);
}

TEST_CASE("short term: pure noise scores a lower PSR than the training frame") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};

  auto trained = tracker.Localize(scenes::FrameAt(seq, 0), state);

  std::mt19937 rng(77);
  cv::Mat noise(240, 320, CV_8UC3);
  for (int y = 0; y < noise.rows; ++y)
    for (int x = 0; x < noise.cols; ++x)
      noise.at<cv::Vec3b>(y, x) = {static_cast<uchar>(rng() & 0xFF),
                                   static_cast<uchar>(rng() & 0xFF),
                                   static_cast<uchar>(rng() & 0xFF)};
  auto unrelated = tracker.Localize({noise, 1}, state);
  CHECK(unrelated.response.psr < trained.response.psr);
  CHECK(Quality(unrelated.response) < Quality(trained.response));
}

TEST_CASE("short term: eta 0 model update is bit-identical") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};

  std::vector<cv::Mat> before;
  for (const auto &ch : tracker.model().channels) before.push_back(ch.clone());
  for (int k = 0; k < 3; ++k) tracker.UpdateModel(scenes::FrameAt(seq, 0), state, 0.0);
  REQUIRE(tracker.model().channels.size() == before.size());
  for (size_t c = 0; c < before.size(); ++c) {
    CHECK(oracles::BitIdentical(tracker.model().channels[c], before[c]));
  }
}

TEST_CASE("short term: repeated updates on a static scene stay locked") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  tracker.Init(scenes::FrameAt(seq, 0), scenes::InitBox(seq), TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};

  const double tolerance = 0.5 * CellsToPixels(tracker, 1.0);
  for (int f = 0; f < 100; ++f) {
    auto loc = tracker.Localize(scenes::FrameAt(seq, 0), state);
    CHECK(cv::norm(loc.state.center - cv::Point2d(160, 120)) < tolerance);
    tracker.UpdateModel(scenes::FrameAt(seq, 0), state, 0.02);
  }
}

TEST_CASE("short term: update succeeds on an uninformative scene via the mask fallback") {
  cv::Mat flat(240, 320, CV_8UC3, cv::Vec3b(120, 120, 120));
  ImageFrame frame{flat, 0};
  ShortTermTracker tracker;
  tracker.Init(frame, {136, 102, 48, 36}, TestParams());
  TargetState state{{160, 120}, {48, 36}, 1.0};
  CHECK_NOTHROW(tracker.UpdateModel(frame, state, 0.02));
}

TEST_CASE("short term: degenerate initialization box throws") {
  RenderedSequence seq = GenerateSynthetic(scenes::StaticScript(1));
  ShortTermTracker tracker;
  CHECK_THROWS_AS(tracker.Init(scenes::FrameAt(seq, 0), {-100, -100, 20, 20}, TestParams()),
                  std::invalid_argument);
}
