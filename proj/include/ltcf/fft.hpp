#ifndef LTCF_FFT_HPP_
#define LTCF_FFT_HPP_

#include <opencv2/core.hpp>

namespace ltcf {

// All transforms work on CV_64F planes and keep the full complex spectrum
// (CV_64FC2). The unnormalized forward / normalized inverse convention
// matches cv::dft defaults.

inline cv::Mat Fft2(const cv::Mat &real_plane) {
  CV_Assert(real_plane.type() == CV_64FC1);
  cv::Mat spectrum;
  cv::dft(real_plane, spectrum, cv::DFT_COMPLEX_OUTPUT);
  return spectrum;
}

inline cv::Mat Ifft2Real(const cv::Mat &spectrum) {
  CV_Assert(spectrum.type() == CV_64FC2);
  cv::Mat plane;
  cv::dft(spectrum, plane, cv::DFT_INVERSE | cv::DFT_SCALE | cv::DFT_REAL_OUTPUT);
  return plane;
}

// a .* conj(b), elementwise over full complex spectra.
inline cv::Mat SpectrumMulConj(const cv::Mat &a, const cv::Mat &b) {
  cv::Mat out;
  cv::mulSpectrums(a, b, out, 0, true);
  return out;
}

inline cv::Mat SpectrumMul(const cv::Mat &a, const cv::Mat &b) {
  cv::Mat out;
  cv::mulSpectrums(a, b, out, 0, false);
  return out;
}

// Embeds a plane at the top-left corner of a larger zero plane. Filter
// coefficients keep their coordinates, so correlation responses computed
// on the padded plane line up with the unpadded ones.
inline cv::Mat ZeroPadToSize(const cv::Mat &plane, const cv::Size &size) {
  CV_Assert(plane.cols <= size.width && plane.rows <= size.height);
  if (plane.size() == size) return plane;
  cv::Mat padded = cv::Mat::zeros(size, plane.type());
  plane.copyTo(padded(cv::Rect(0, 0, plane.cols, plane.rows)));
  return padded;
}

}  // namespace ltcf

#endif  // LTCF_FFT_HPP_
