#include "wl1/video.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "wl1/errors.hpp"
#include "wl1/index_set.hpp"
#include "wl1/metrics.hpp"
#include "wl1/models.hpp"
#include "wl1/operators.hpp"
#include "wl1/random.hpp"

namespace wl1 {

namespace {

constexpr std::uint64_t kVideoStream = 6;
constexpr std::uint64_t kSequenceStream = 7;

// synthetic sequence shape
constexpr double kPersistentFraction = 0.12;
constexpr double kPersistentAmplitude = 60.0;
constexpr double kDrift = 0.05;
constexpr double kFreshFraction = 0.04;
constexpr double kFreshAmplitude = 15.0;
constexpr double kMeanLevel = 128.0;

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// PGM header token, skipping whitespace and comments
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok += static_cast<char>(c);
  }
  return tok;
}

std::size_t parse_size(const std::string& tok, const std::string& path) {
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InputError("read_pgm: bad header in '" + path + "'");
  }
}

// natural order: digit runs compare numerically
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const std::string na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      const auto ta = na.find_first_not_of('0'), tb = nb.find_first_not_of('0');
      const std::string sa = ta == std::string::npos ? "" : na.substr(ta);
      const std::string sb = tb == std::string::npos ? "" : nb.substr(tb);
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

}  // namespace

std::vector<Frame> read_yuv_luma(const std::string& path, std::size_t width, std::size_t height,
                                 std::size_t max_frames) {
  if (width == 0 || height == 0 || width % 2 || height % 2) {
    throw InputError("read_yuv_luma: 4:2:0 needs even, positive dimensions");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  const std::size_t luma = width * height;
  const std::size_t chroma = luma / 2;
  std::vector<Frame> frames;
  std::vector<unsigned char> buf(luma);
  while (frames.size() < max_frames) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(luma));
    if (in.gcount() == 0) break;
    if (static_cast<std::size_t>(in.gcount()) != luma) throw InputError("read_yuv_luma: truncated frame in '" + path + "'");
    in.ignore(static_cast<std::streamsize>(chroma));
    if (static_cast<std::size_t>(in.gcount()) != chroma) throw InputError("read_yuv_luma: truncated chroma in '" + path + "'");
    Frame f(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = buf[r * width + c];
      }
    }
    frames.push_back(std::move(f));
  }
  if (frames.empty()) throw InputError("read_yuv_luma: no frames in '" + path + "'");
  return frames;
}

Frame read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  const std::string magic = pgm_token(in);
  if (magic != "P5" && magic != "P2") throw InputError("read_pgm: '" + path + "' is not a P2/P5 PGM");
  const std::size_t w = parse_size(pgm_token(in), path);
  const std::size_t h = parse_size(pgm_token(in), path);
  const std::size_t maxval = parse_size(pgm_token(in), path);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) throw InputError("read_pgm: unsupported header in '" + path + "'");
  Frame f(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(w));
  if (magic == "P5") {
    std::vector<unsigned char> buf(w * h);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) throw InputError("read_pgm: truncated '" + path + "'");
    for (std::size_t k = 0; k < buf.size(); ++k) f(static_cast<Eigen::Index>(k / w), static_cast<Eigen::Index>(k % w)) = buf[k];
  } else {
    for (std::size_t k = 0; k < w * h; ++k) {
      const std::string tok = pgm_token(in);
      if (tok.empty()) throw InputError("read_pgm: truncated '" + path + "'");
      const std::size_t v = parse_size(tok, path);
      if (v > maxval) throw InputError("read_pgm: sample above maxval in '" + path + "'");
      f(static_cast<Eigen::Index>(k / w), static_cast<Eigen::Index>(k % w)) = static_cast<double>(v);
    }
  }
  if (maxval != 255) f *= 255.0 / static_cast<double>(maxval);
  return f;
}

void write_pgm(const std::string& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < frame.rows(); ++r) {
    for (Eigen::Index c = 0; c < frame.cols(); ++c) out.put(static_cast<char>(clamp_byte(frame(r, c))));
  }
}

std::vector<Frame> read_pgm_dir(const std::string& dir, std::size_t max_frames) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InputError("'" + dir + "' is not a directory");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pgm") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end(), natural_less);
  if (names.empty()) throw InputError("no .pgm frames in '" + dir + "'");
  std::vector<Frame> frames;
  for (const auto& name : names) {
    if (frames.size() == max_frames) break;
    frames.push_back(read_pgm((fs::path(dir) / name).string()));
    if (frames.back().rows() != frames.front().rows() || frames.back().cols() != frames.front().cols()) {
      throw InputError("read_pgm_dir: frame '" + name + "' has a different size");
    }
  }
  return frames;
}

std::vector<Vector> split_blocks(const Frame& frame, BlockShape block) {
  const auto R = static_cast<std::size_t>(frame.rows()), C = static_cast<std::size_t>(frame.cols());
  if (block.rows == 0 || block.cols == 0 || R % block.rows || C % block.cols) {
    throw InputError("split_blocks: frame is not a whole number of blocks");
  }
  std::vector<Vector> out;
  for (std::size_t br = 0; br < R / block.rows; ++br) {
    for (std::size_t bc = 0; bc < C / block.cols; ++bc) {
      Vector v(static_cast<Eigen::Index>(block.size()));
      for (std::size_t r = 0; r < block.rows; ++r) {
        for (std::size_t c = 0; c < block.cols; ++c) {
          v(static_cast<Eigen::Index>(r * block.cols + c)) =
              frame(static_cast<Eigen::Index>(br * block.rows + r), static_cast<Eigen::Index>(bc * block.cols + c));
        }
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

Frame merge_blocks(const std::vector<Vector>& blocks, std::size_t rows, std::size_t cols, BlockShape block) {
  if (block.rows == 0 || block.cols == 0 || rows % block.rows || cols % block.cols ||
      blocks.size() != (rows / block.rows) * (cols / block.cols)) {
    throw ContractViolation("merge_blocks: block layout mismatch");
  }
  Frame f(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const std::size_t per_row = cols / block.cols;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (static_cast<std::size_t>(blocks[b].size()) != block.size()) throw ContractViolation("merge_blocks: block size mismatch");
    const std::size_t br = b / per_row, bc = b % per_row;
    for (std::size_t r = 0; r < block.rows; ++r) {
      for (std::size_t c = 0; c < block.cols; ++c) {
        f(static_cast<Eigen::Index>(br * block.rows + r), static_cast<Eigen::Index>(bc * block.cols + c)) =
            blocks[b](static_cast<Eigen::Index>(r * block.cols + c));
      }
    }
  }
  return f;
}

Vector quantize_pixels(const Vector& pixels) {
  Vector q(pixels.size());
  for (Eigen::Index i = 0; i < pixels.size(); ++i) q(i) = clamp_byte(pixels(i));
  return q;
}

std::size_t top_count(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ContractViolation("top_count: fraction must lie in (0, 1]");
  return std::min(n, round_half_up(static_cast<double>(n) * fraction));
}

std::vector<Frame> synthetic_sequence(std::size_t rows, std::size_t cols, std::size_t frames,
                                      BlockShape block, std::uint64_t seed) {
  if (frames == 0) throw ContractViolation("synthetic_sequence: need frames");
  const std::size_t nblocks = (rows / block.rows) * (cols / block.cols);
  if (rows % block.rows || cols % block.cols) throw ContractViolation("synthetic_sequence: rows/cols must tile");
  const std::size_t n = block.size();
  const Dct2d dct(block);
  const auto persistent = static_cast<std::size_t>(kPersistentFraction * static_cast<double>(n));
  const auto fresh = static_cast<std::size_t>(kFreshFraction * static_cast<double>(n));

  std::vector<std::vector<Vector>> blocks(frames, std::vector<Vector>(nblocks));
  for (std::size_t b = 0; b < nblocks; ++b) {
    Rng rng = make_rng(seed, {kSequenceStream, b});
    // DC plus persistent AC positions
    IndexSet ac = sample_without_replacement(n - 1, persistent, rng);
    const Vector base = kPersistentAmplitude * standard_normal(persistent, rng);
    for (std::size_t t = 0; t < frames; ++t) {
      Vector c = Vector::Zero(static_cast<Eigen::Index>(n));
      c(0) = kMeanLevel * std::sqrt(static_cast<double>(n));
      const Vector drift = standard_normal(persistent, rng);
      for (std::size_t k = 0; k < persistent; ++k) {
        c(static_cast<Eigen::Index>(ac[k] + 1)) = base(static_cast<Eigen::Index>(k)) * (1.0 + kDrift * drift(static_cast<Eigen::Index>(k)));
      }
      const IndexSet extra = sample_without_replacement(n, fresh, rng);
      const Vector amp = kFreshAmplitude * standard_normal(fresh, rng);
      for (std::size_t k = 0; k < fresh; ++k) c(static_cast<Eigen::Index>(extra[k])) += amp(static_cast<Eigen::Index>(k));
      Vector px;
      dct.inverse(c, px);
      blocks[t][b] = quantize_pixels(px);
    }
  }
  std::vector<Frame> out;
  for (std::size_t t = 0; t < frames; ++t) out.push_back(merge_blocks(blocks[t], rows, cols, block));
  return out;
}

std::size_t VideoResult::method(const std::string& name) const {
  for (std::size_t k = 0; k < methods.size(); ++k) {
    if (methods[k] == name) return k;
  }
  throw ContractViolation("no video method '" + name + "'");
}

double VideoResult::mean_psnr(const std::string& name, std::size_t first, std::size_t last) const {
  const std::size_t k = method(name);
  if (first > last || last >= psnr.size()) throw ContractViolation("mean_psnr: frame range");
  double sum = 0.0;
  for (std::size_t t = first; t <= last; ++t) sum += psnr[t][k];
  return sum / static_cast<double>(last - first + 1);
}

namespace {

enum class Mode { l1, single, adaptive, oracle };

struct Method {
  std::string name;
  Mode mode;
  double weight = 1.0;
};

std::vector<Method> parse_methods(const VideoConfig& v) {
  std::vector<Method> out;
  for (const auto& m : v.methods) {
    if (m == "l1") {
      out.push_back({"l1", Mode::l1});
    } else if (m == "single") {
      for (double w : v.single_weights) {
        if (!(w >= 0.0 && w <= 1.0)) throw InputError("video: single weight outside [0,1]");
        out.push_back({"w" + format_number(w), Mode::single, w});
      }
    } else if (m == "adaptive") {
      out.push_back({"adaptive", Mode::adaptive});
    } else if (m == "oracle") {
      out.push_back({"oracle", Mode::oracle});
    } else {
      throw InputError("video: unknown method '" + m + "'");
    }
  }
  if (out.empty()) throw InputError("video: no methods");
  return out;
}

// Per-method, per-block history of the recovered frames.
struct BlockState {
  Vector counts;        // times in the top set
  IndexSet seen;        // union of top sets
  std::size_t frames = 0;
};

}  // namespace

VideoResult run_video(const ExperimentSpec& spec) {
  const VideoConfig& v = spec.video;
  std::vector<Frame> frames;
  if (v.format == "synthetic") {
    frames = synthetic_sequence(v.height, v.width, v.frames, {v.block_rows, v.block_cols}, derive_seed(spec.seed, {kSequenceStream}));
  } else if (v.format == "yuv") {
    frames = read_yuv_luma(v.input, v.width, v.height, v.frames);
  } else if (v.format == "pgm") {
    frames = read_pgm_dir(v.input, v.frames);
  } else {
    throw InputError("video: unknown format '" + v.format + "'");
  }
  return run_video(spec, frames);
}

VideoResult run_video(const ExperimentSpec& spec, const std::vector<Frame>& frames) {
  const VideoConfig& v = spec.video;
  if (frames.empty()) throw InputError("video: no frames");
  const BlockShape shape{v.block_rows, v.block_cols};
  const auto rows = static_cast<std::size_t>(frames[0].rows()), cols = static_cast<std::size_t>(frames[0].cols());
  for (const auto& f : frames) {
    if (static_cast<std::size_t>(f.rows()) != rows || static_cast<std::size_t>(f.cols()) != cols) {
      throw InputError("video: frames differ in size");
    }
  }
  const std::size_t n = shape.size();
  if (v.m == 0 || v.m > n) throw InputError("video: m must lie in (0, block size]");
  const std::vector<Method> methods = parse_methods(v);
  const std::size_t K = methods.size(), T = frames.size();
  const auto dct = std::make_shared<const Dct2d>(shape);
  const std::size_t top = top_count(n, v.top_fraction);

  std::vector<std::vector<Vector>> truth;  // [frame][block] pixels
  for (const auto& f : frames) truth.push_back(split_blocks(f, shape));
  const std::size_t B = truth[0].size();

  auto top_set = [&](const Vector& pixels) {
    Vector c;
    dct->forward(pixels, c);
    return top_k_magnitude(c, top);
  };

  // oracle probabilities from the true frames
  std::vector<Vector> oracle(B, Vector::Zero(static_cast<Eigen::Index>(n)));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t i : top_set(truth[t][b])) oracle[b](static_cast<Eigen::Index>(i)) += 1.0;
    }
  }
  std::vector<Vector> oracle_weights;
  for (auto& p : oracle) oracle_weights.push_back(prob_to_weight(Vector(p / static_cast<double>(T))));

  SolverConfig cfg;
  cfg.step_tol = v.step_tol;
  cfg.feas_tol = spec.feas_tol;
  cfg.max_iterations = v.max_iterations;

  VideoResult res;
  for (const auto& m : methods) res.methods.push_back(m.name);
  res.psnr.assign(T, std::vector<double>(K, 0.0));
  res.nonconverged.assign(K, 0);
  res.solves_per_method = T * B;

  std::vector<std::vector<BlockState>> state(K, std::vector<BlockState>(B));
  std::vector<std::vector<Vector>> recovered(K, std::vector<Vector>(B));
  std::exception_ptr error;
  std::mutex error_lock;
  // frame 1 is plain l1 for every non-oracle method; solved once by `shared`
  std::size_t shared = K;
  for (std::size_t k = 0; k < K && shared == K; ++k) {
    if (methods[k].mode != Mode::oracle) shared = k;
  }
  auto reuses_first = [&](std::size_t t, std::size_t k) {
    return t == 0 && k != shared && methods[k].mode != Mode::oracle;
  };

  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::vector<bool>> failed(K, std::vector<bool>(B, false));
    const long tasks = static_cast<long>(K * B);
#pragma omp parallel for schedule(dynamic)
    for (long task = 0; task < tasks; ++task) {
      const std::size_t k = static_cast<std::size_t>(task) / B, b = static_cast<std::size_t>(task) % B;
      try {
        if (reuses_first(t, k)) continue;
        Rng rng = make_rng(spec.seed, {kVideoStream, t, b});
        IndexSet pixels = sample_without_replacement(n, v.m, rng);
        auto op = std::make_shared<const MeasurementOperator>(MeasurementOperator::restricted_dct(shape, pixels));
        RecoveryProblem prob;
        prob.op = op;
        prob.y.resize(static_cast<Eigen::Index>(v.m));
        for (std::size_t r = 0; r < v.m; ++r) prob.y(static_cast<Eigen::Index>(r)) = truth[t][b](static_cast<Eigen::Index>(pixels[r]));
        prob.epsilon = 0.0;
        prob.weights = Vector::Ones(static_cast<Eigen::Index>(n));
        const BlockState& st = state[k][b];
        if (t > 0) {
          switch (methods[k].mode) {
            case Mode::l1:
              break;
            case Mode::single:
              for (std::size_t i : st.seen) prob.weights(static_cast<Eigen::Index>(i)) = methods[k].weight;
              break;
            case Mode::adaptive:
              prob.weights = prob_to_weight(Vector(st.counts / static_cast<double>(st.frames)));
              break;
            case Mode::oracle:
              prob.weights = oracle_weights[b];
              break;
          }
        } else if (methods[k].mode == Mode::oracle) {
          prob.weights = oracle_weights[b];
        }
        SolverConfig c = cfg;
        c.norm_bound = operator_norm_bound(*op);
        const SolverReport rep = solve(prob, c);
        failed[k][b] = !rep.converged;
        Vector px;
        dct->inverse(rep.solution, px);
        recovered[k][b] = quantize_pixels(px);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_lock);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);

    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t b = 0; b < B; ++b) {
        if (reuses_first(t, k)) {
          recovered[k][b] = recovered[shared][b];
          failed[k][b] = failed[shared][b];
        }
        if (failed[k][b]) ++res.nonconverged[k];
        BlockState& st = state[k][b];
        if (st.counts.size() == 0) st.counts = Vector::Zero(static_cast<Eigen::Index>(n));
        const IndexSet s = top_set(recovered[k][b]);
        for (std::size_t i : s) st.counts(static_cast<Eigen::Index>(i)) += 1.0;
        st.seen = set_union(st.seen, s);
        ++st.frames;
      }
      const Frame f = merge_blocks(recovered[k], rows, cols, shape);
      res.psnr[t][k] = psnr(Eigen::Map<const Vector>(frames[t].data(), frames[t].size()),
                            Eigen::Map<const Vector>(f.data(), f.size()), rows * cols);
    }
  }
  return res;
}

CsvTable video_table(const ExperimentSpec& spec, const VideoResult& result) {
  std::vector<std::string> cols = {"frame"};
  for (const auto& m : result.methods) cols.push_back("psnr_" + m);
  CsvTable table(spec, cols);
  for (std::size_t t = 0; t < result.psnr.size(); ++t) {
    std::vector<double> row = {static_cast<double>(t + 1)};
    row.insert(row.end(), result.psnr[t].begin(), result.psnr[t].end());
    table.add_row(row);
  }
  return table;
}

}  // namespace wl1
