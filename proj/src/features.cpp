#include "ltcf/features.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <opencv2/imgproc.hpp>

#include "ltcf/geometry.hpp"

namespace ltcf {

ColorNameTable ColorNameTable::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("color-name table not readable: " + path);

  const std::streamsize raw_size =
      static_cast<std::streamsize>(kRows) * kChannels * sizeof(float);
  in.seekg(0, std::ios::end);
  std::streamsize file_size = in.tellg();
  in.seekg(0);

  ColorNameTable table;
  table.values_.resize(static_cast<size_t>(kRows) * kChannels);

  if (file_size == raw_size) {
    in.read(reinterpret_cast<char *>(table.values_.data()), raw_size);
    if (!in) throw std::runtime_error("color-name table truncated: " + path);
    return table;
  }

  // CSV fallback: one row of 10 comma-separated floats per line.
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= kRows) throw std::runtime_error("color-name table has too many rows: " + path);
    std::stringstream ss(line);
    std::string field;
    for (int c = 0; c < kChannels; ++c) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error("color-name table row " + std::to_string(row + 1) +
                                 " has fewer than 10 values: " + path);
      }
      table.values_[static_cast<size_t>(row) * kChannels + c] = std::stof(field);
    }
    ++row;
  }
  if (row != kRows) {
    throw std::runtime_error("color-name table must have 32768 rows, got " +
                             std::to_string(row) + ": " + path);
  }
  return table;
}

cv::Mat GetSubwindow(const cv::Mat &image, const cv::Point2d &center, int width, int height) {
  CV_Assert(width > 0 && height > 0 && !image.empty());
  int x0 = static_cast<int>(std::floor(center.x - width / 2.0));
  int y0 = static_cast<int>(std::floor(center.y - height / 2.0));

  int left = std::max(0, -x0);
  int top = std::max(0, -y0);
  int right = std::max(0, x0 + width - image.cols);
  int bottom = std::max(0, y0 + height - image.rows);

  cv::Rect inside(x0 + left, y0 + top, width - left - right, height - top - bottom);
  if (inside.width <= 0 || inside.height <= 0) {
    // Region fully outside: replicate the nearest border pixel.
    int cx = std::clamp(x0, 0, image.cols - 1);
    int cy = std::clamp(y0, 0, image.rows - 1);
    cv::Mat out;
    cv::repeat(image(cv::Rect(cx, cy, 1, 1)), height, width, out);
    return out;
  }

  cv::Mat out;
  cv::copyMakeBorder(image(inside), out, top, bottom, left, right, cv::BORDER_REPLICATE);
  return out;
}

cv::Mat HannWindow2d(const cv::Size &size) {
  auto hann1d = [](int n) {
    cv::Mat w(n, 1, CV_64FC1);
    if (n == 1) {
      w.at<double>(0) = 1.0;
      return w;
    }
    for (int i = 0; i < n; ++i) {
      w.at<double>(i) = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
    }
    return w;
  };
  return hann1d(size.height) * hann1d(size.width).t();
}

FeatureStack ApplyWindow(const FeatureStack &features) {
  FeatureStack out;
  out.cell_size = features.cell_size;
  out.region = features.region;
  if (features.channels.empty()) return out;
  cv::Mat window = HannWindow2d(features.PlaneSize());
  out.channels.reserve(features.channels.size());
  for (const cv::Mat &ch : features.channels) {
    out.channels.push_back(ch.mul(window));
  }
  return out;
}

namespace {

cv::Mat ToGray01(const cv::Mat &bgr) {
  cv::Mat gray;
  cv::cvtColor(bgr, gray, cv::COLOR_BGR2GRAY);
  gray.convertTo(gray, CV_64FC1, 1.0 / 255.0);
  return gray;
}

// 18 contrast-sensitive orientation channels: hard-binned per-pixel
// gradient magnitudes accumulated per cell, then normalized against the
// four overlapping 2x2 cell blocks and truncated at 0.2.
std::vector<cv::Mat> HogChannels(const cv::Mat &patch, int cell_size, const cv::Size &grid) {
  const cv::Mat gray = ToGray01(patch);
  const int w = gray.cols;
  const int h = gray.rows;
  const double bin_width = 2.0 * std::numbers::pi / kHogChannels;

  std::vector<cv::Mat> hist(kHogChannels);
  for (auto &m : hist) m = cv::Mat::zeros(grid, CV_64FC1);

  for (int y = 0; y < h; ++y) {
    const double *rm = gray.ptr<double>(std::max(0, y - 1));
    const double *rp = gray.ptr<double>(std::min(h - 1, y + 1));
    const double *r = gray.ptr<double>(y);
    int cy = std::min(y / cell_size, grid.height - 1);
    for (int x = 0; x < w; ++x) {
      double gx = r[std::min(w - 1, x + 1)] - r[std::max(0, x - 1)];
      double gy = rp[x] - rm[x];
      double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      int bin = std::min(static_cast<int>(theta / bin_width), kHogChannels - 1);
      int cx = std::min(x / cell_size, grid.width - 1);
      hist[bin].at<double>(cy, cx) += mag;
    }
  }

  cv::Mat energy = cv::Mat::zeros(grid, CV_64FC1);
  for (const auto &m : hist) cv::accumulate(m.mul(m), energy);

  auto block_norm = [&](int cy, int cx) {
    // 2x2 block with top-left (cy, cx), cells clamped to the grid
    double e = 0.0;
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx)
        e += energy.at<double>(std::clamp(cy + dy, 0, grid.height - 1),
                               std::clamp(cx + dx, 0, grid.width - 1));
    return std::sqrt(e + 1e-12);
  };

  std::vector<cv::Mat> out(kHogChannels);
  for (auto &m : out) m = cv::Mat::zeros(grid, CV_64FC1);
  for (int cy = 0; cy < grid.height; ++cy) {
    for (int cx = 0; cx < grid.width; ++cx) {
      double norms[4] = {block_norm(cy - 1, cx - 1), block_norm(cy - 1, cx),
                         block_norm(cy, cx - 1), block_norm(cy, cx)};
      for (int b = 0; b < kHogChannels; ++b) {
        double v = hist[b].at<double>(cy, cx);
        double acc = 0.0;
        for (double n : norms) acc += std::min(v / n, 0.2);
        out[b].at<double>(cy, cx) = 0.25 * acc;
      }
    }
  }
  return out;
}

std::vector<cv::Mat> ColorNameChannels(const cv::Mat &patch, const ColorNameTable &table,
                                       int cell_size, const cv::Size &grid) {
  std::vector<cv::Mat> out(ColorNameTable::kChannels);
  for (auto &m : out) m = cv::Mat::zeros(grid, CV_64FC1);
  cv::Mat counts = cv::Mat::zeros(grid, CV_64FC1);

  for (int y = 0; y < patch.rows; ++y) {
    int cy = std::min(y / cell_size, grid.height - 1);
    const cv::Vec3b *row = patch.ptr<cv::Vec3b>(y);
    for (int x = 0; x < patch.cols; ++x) {
      int cx = std::min(x / cell_size, grid.width - 1);
      const float *probs = table.LookupBgr(row[x]);
      for (int c = 0; c < ColorNameTable::kChannels; ++c) {
        out[c].at<double>(cy, cx) += probs[c];
      }
      counts.at<double>(cy, cx) += 1.0;
    }
  }
  for (auto &m : out) cv::divide(m, counts, m);
  return out;
}

cv::Mat GrayChannel(const cv::Mat &patch, int cell_size, const cv::Size &grid) {
  const cv::Mat gray = ToGray01(patch);
  cv::Mat cellavg = cv::Mat::zeros(grid, CV_64FC1);
  cv::Mat counts = cv::Mat::zeros(grid, CV_64FC1);
  for (int y = 0; y < gray.rows; ++y) {
    int cy = std::min(y / cell_size, grid.height - 1);
    const double *row = gray.ptr<double>(y);
    for (int x = 0; x < gray.cols; ++x) {
      int cx = std::min(x / cell_size, grid.width - 1);
      cellavg.at<double>(cy, cx) += row[x];
      counts.at<double>(cy, cx) += 1.0;
    }
  }
  cv::divide(cellavg, counts, cellavg);
  return cellavg - cv::mean(cellavg)[0];
}

}  // namespace

FeatureStack ExtractFeatures(const ImageFrame &frame, const cv::Rect2d &region,
                             const cv::Size &template_px, const FeatureConfig &config) {
  if (region.width <= 0.0 || region.height <= 0.0) {
    throw std::invalid_argument("ExtractFeatures: zero-area region");
  }
  if (template_px.width < 1 || template_px.height < 1 || config.cell_size < 1) {
    throw std::invalid_argument("ExtractFeatures: invalid template geometry");
  }
  if (!config.use_hog && !config.use_colornames && !config.use_gray) {
    throw std::invalid_argument("ExtractFeatures: no feature family enabled");
  }
  if (config.use_colornames && !config.colornames) {
    throw std::invalid_argument("ExtractFeatures: color names enabled without a table");
  }

  cv::Mat patch = GetSubwindow(frame.pixels, RectCenter(region),
                               std::max(1, static_cast<int>(std::round(region.width))),
                               std::max(1, static_cast<int>(std::round(region.height))));
  if (patch.size() != template_px) {
    cv::resize(patch, patch, template_px, 0, 0, cv::INTER_LINEAR);
  }

  const int cell = config.cell_size;
  cv::Size grid((template_px.width + cell - 1) / cell, (template_px.height + cell - 1) / cell);
  // Replicate-pad partial border cells so every cell covers cell^2 pixels.
  if (grid.width * cell != patch.cols || grid.height * cell != patch.rows) {
    cv::copyMakeBorder(patch, patch, 0, grid.height * cell - patch.rows, 0,
                       grid.width * cell - patch.cols, cv::BORDER_REPLICATE);
  }

  FeatureStack stack;
  stack.cell_size = cell;
  stack.region = region;
  if (config.use_hog) {
    auto hog = HogChannels(patch, cell, grid);
    stack.channels.insert(stack.channels.end(), hog.begin(), hog.end());
  }
  if (config.use_colornames) {
    auto cn = ColorNameChannels(patch, *config.colornames, cell, grid);
    stack.channels.insert(stack.channels.end(), cn.begin(), cn.end());
  }
  if (config.use_gray) {
    stack.channels.push_back(GrayChannel(patch, cell, grid));
  }
  return stack;
}

}  // namespace ltcf
