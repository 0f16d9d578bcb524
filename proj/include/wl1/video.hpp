#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wl1/dct.hpp"
#include "wl1/experiments.hpp"
#include "wl1/types.hpp"

namespace wl1 {

/// 8-bit luma frame held as doubles, rows x cols.
using Frame = Matrix;

/// Luma planes of a raw planar YUV 4:2:0 file (8-bit). Reads at most
/// max_frames; throws InputError on a short or missing file.
std::vector<Frame> read_yuv_luma(const std::string& path, std::size_t width, std::size_t height,
                                 std::size_t max_frames);

/// Binary (P5) or ASCII (P2) PGM with maxval <= 255.
Frame read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Frame& frame);

/// *.pgm files of a directory in natural (numeric-aware) name order.
std::vector<Frame> read_pgm_dir(const std::string& dir, std::size_t max_frames);

/// Frames with a persistent dominant DCT support per block, slowly
/// drifting amplitudes, a fresh weaker component each frame, and 8-bit
/// quantization.
std::vector<Frame> synthetic_sequence(std::size_t rows, std::size_t cols, std::size_t frames,
                                      BlockShape block, std::uint64_t seed);

/// Row-major flattened blocks, blocks ordered row-major over the frame.
std::vector<Vector> split_blocks(const Frame& frame, BlockShape block);
Frame merge_blocks(const std::vector<Vector>& blocks, std::size_t rows, std::size_t cols, BlockShape block);

/// Round to the nearest integer and clamp to [0, 255].
Vector quantize_pixels(const Vector& pixels);

/// Coefficients kept by the top-fraction rule: round-half-up of n * fraction.
std::size_t top_count(std::size_t n, double fraction);

struct VideoResult {
  std::vector<std::string> methods;
  /// psnr[frame][method]
  std::vector<std::vector<double>> psnr;
  /// Solves stopped by the iteration cap, per method.
  std::vector<std::size_t> nonconverged;
  std::size_t solves_per_method = 0;

  std::size_t method(const std::string& name) const;
  /// Mean PSNR of a method over frames [first, last] (0-based, inclusive).
  double mean_psnr(const std::string& name, std::size_t first, std::size_t last) const;
};

VideoResult run_video(const ExperimentSpec& spec);
/// Supplied frames instead of spec.video.format/input.
VideoResult run_video(const ExperimentSpec& spec, const std::vector<Frame>& frames);

CsvTable video_table(const ExperimentSpec& spec, const VideoResult& result);

}  // namespace wl1
